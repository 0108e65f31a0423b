#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trex/error.hpp"

namespace trex {

enum class column_kind { numeric, boolean };

struct column {
    std::string name;
    column_kind kind = column_kind::numeric;
    std::vector<double> values; // booleans stored as 0.0 / 1.0
};

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

/// Shortest round-trip decimal rendering; integral values print without
/// a fractional part.
inline std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// An immutable, ordered table of named columns. The row index is the time
/// axis: row i is the instant i, and successive rows are successive instants.
class trace {
public:
    trace() = default;

    static trace from_columns(std::vector<column> cols) {
        trace t;
        std::size_t rows = cols.empty() ? 0 : cols.front().values.size();
        for (const auto& c : cols) {
            if (!is_identifier(c.name))
                throw_data("trace", "invalid column name '" + c.name + "'");
            if (c.values.size() != rows)
                throw_data("trace", "column '" + c.name + "' has mismatched length");
            for (double v : c.values) {
                if (!std::isfinite(v))
                    throw_data("trace", "non-finite value in column '" + c.name + "'");
                if (c.kind == column_kind::boolean && v != 0.0 && v != 1.0)
                    throw_data("trace", "boolean column '" + c.name + "' holds a non 0/1 value");
            }
        }
        t.cols_ = std::move(cols);
        t.rows_ = rows;
        for (std::size_t i = 0; i < t.cols_.size(); ++i) {
            if (!t.index_.emplace(t.cols_[i].name, i).second)
                throw_data("trace", "duplicate column name '" + t.cols_[i].name + "'");
        }
        return t;
    }

    std::size_t n_rows() const noexcept { return rows_; }
    std::size_t n_cols() const noexcept { return cols_.size(); }
    const std::vector<column>& columns() const noexcept { return cols_; }
    const column& col(std::size_t i) const { return cols_.at(i); }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    double value(std::size_t col, std::size_t row) const {
        return cols_[col].values[row];
    }

    /// Cell access with the out-of-range marker: nullopt for any row index
    /// outside [0, n_rows). Unknown column names are an error, not a marker.
    std::optional<double> get(std::string_view column_name, std::int64_t row) const {
        auto idx = find(column_name);
        if (!idx) throw_data("trace", "unknown column '" + std::string(column_name) + "'");
        if (row < 0 || row >= static_cast<std::int64_t>(rows_)) return std::nullopt;
        return cols_[*idx].values[static_cast<std::size_t>(row)];
    }

    bool operator==(const trace& o) const {
        if (rows_ != o.rows_ || cols_.size() != o.cols_.size()) return false;
        for (std::size_t i = 0; i < cols_.size(); ++i) {
            if (cols_[i].name != o.cols_[i].name || cols_[i].kind != o.cols_[i].kind ||
                cols_[i].values != o.cols_[i].values)
                return false;
        }
        return true;
    }

private:
    std::vector<column> cols_;
    std::size_t rows_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

struct csv_options {
    std::set<std::string> boolean_columns;
    std::set<std::string> ignore_columns; // loaded CSV may carry non-data columns (dates etc.)
    char delimiter = ',';
    bool infer_booleans = false; // opt-in: promote all-0/1 columns to boolean
};

/// Byte range of one CSV record (excluding its line terminator), so callers
/// can reproduce the input byte-for-byte.
struct csv_record_span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t line = 0; // 1-based line where the record starts
};

struct csv_document {
    trex::trace data;
    std::string raw;
    std::vector<csv_record_span> records; // [0] is the header record
};

namespace detail {

struct csv_record {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t line = 1;
};

inline std::vector<csv_record> scan_csv(std::string_view text, char delim) {
    std::vector<csv_record> records;
    std::size_t i = 0;
    std::size_t line = 1;
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") i = 3; // UTF-8 BOM

    while (i < text.size()) {
        csv_record rec;
        rec.begin = i;
        rec.line = line;
        std::string cell;
        bool done = false;
        while (!done) {
            if (i < text.size() && text[i] == '"') {
                ++i;
                while (true) {
                    if (i >= text.size())
                        throw_csv("unterminated quoted cell", rec.line);
                    if (text[i] == '"') {
                        if (i + 1 < text.size() && text[i + 1] == '"') {
                            cell += '"';
                            i += 2;
                        } else {
                            ++i;
                            break;
                        }
                    } else {
                        if (text[i] == '\n') ++line;
                        cell += text[i++];
                    }
                }
            }
            while (i < text.size() && text[i] != delim && text[i] != '\n' && text[i] != '\r') {
                cell += text[i++];
            }
            if (i >= text.size()) {
                rec.end = i;
                rec.cells.push_back(std::move(cell));
                done = true;
            } else if (text[i] == delim) {
                rec.cells.push_back(std::move(cell));
                cell.clear();
                ++i;
            } else { // EOL
                rec.end = i;
                rec.cells.push_back(std::move(cell));
                if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                    i += 2;
                else
                    ++i;
                ++line;
                done = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::optional<bool> parse_bool_cell(const std::string& raw) {
    std::string t = trim(raw);
    for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "0" || t == "false") return false;
    if (t == "1" || t == "true") return true;
    return std::nullopt;
}

inline std::optional<double> parse_numeric_cell(const std::string& raw) {
    std::string t = trim(raw);
    if (t.empty()) return std::nullopt;
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt; // NaN/inf never enter a trace
    return v;
}

} // namespace detail

inline csv_document load_csv_document(std::string_view text, const csv_options& opts = {}) {
    csv_document doc;
    doc.raw.assign(text);
    auto records = detail::scan_csv(text, opts.delimiter);
    if (records.empty())
        throw_csv("missing header row", 1);

    const auto& header = records.front();
    std::set<std::string> seen;
    for (const auto& name : header.cells) {
        if (!seen.insert(name).second)
            throw_csv("duplicate header name '" + name + "'", header.line);
    }

    struct slot {
        std::string name;
        bool ignored = false;
        bool declared_bool = false;
        bool all_boolish = true;
        std::vector<double> values;
        std::vector<bool> numeric_ok;
    };
    std::vector<slot> slots(header.cells.size());
    for (std::size_t c = 0; c < header.cells.size(); ++c) {
        slots[c].name = header.cells[c];
        slots[c].ignored = opts.ignore_columns.count(slots[c].name) > 0;
        slots[c].declared_bool = opts.boolean_columns.count(slots[c].name) > 0;
        if (!slots[c].ignored && !is_identifier(slots[c].name))
            throw_csv("column name '" + slots[c].name + "' is not a valid identifier",
                      header.line);
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.cells.size() != header.cells.size())
            throw_csv("ragged row: expected " + std::to_string(header.cells.size()) +
                          " cells, found " + std::to_string(rec.cells.size()),
                      rec.line);
        for (std::size_t c = 0; c < rec.cells.size(); ++c) {
            slot& s = slots[c];
            if (s.ignored) continue;
            auto b = detail::parse_bool_cell(rec.cells[c]);
            if (s.declared_bool) {
                if (!b)
                    throw_csv("cell '" + rec.cells[c] + "' in boolean column '" + s.name +
                                  "' is not one of 0/1/true/false",
                              rec.line);
                s.values.push_back(*b ? 1.0 : 0.0);
                continue;
            }
            auto v = detail::parse_numeric_cell(rec.cells[c]);
            if (!b) s.all_boolish = false;
            if (v) {
                s.values.push_back(*v);
                s.numeric_ok.push_back(true);
            } else if (b && opts.infer_booleans) {
                s.values.push_back(*b ? 1.0 : 0.0);
                s.numeric_ok.push_back(false);
            } else {
                throw_csv("cell '" + rec.cells[c] + "' in numeric column '" + s.name +
                              "' does not parse as a number",
                          rec.line);
            }
        }
    }

    std::vector<column> cols;
    for (auto& s : slots) {
        if (s.ignored) continue;
        column col;
        col.name = s.name;
        if (s.declared_bool || (opts.infer_booleans && s.all_boolish)) {
            col.kind = column_kind::boolean;
        } else {
            for (std::size_t r = 0; r < s.numeric_ok.size(); ++r) {
                if (!s.numeric_ok[r])
                    throw_csv("cell in numeric column '" + s.name + "' does not parse as a number",
                              records[r + 1].line);
            }
            col.kind = column_kind::numeric;
        }
        col.values = std::move(s.values);
        cols.push_back(std::move(col));
    }

    doc.data = trace::from_columns(std::move(cols));
    for (const auto& rec : records)
        doc.records.push_back({rec.begin, rec.end, rec.line});
    return doc;
}

inline trace load_csv(std::string_view text, const csv_options& opts = {}) {
    return load_csv_document(text, opts).data;
}

inline csv_document load_csv_file(const std::string& path, const csv_options& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_data("csv", "cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_csv_document(buf.str(), opts);
}

inline std::string write_csv(const trace& t, char delimiter = ',') {
    std::string out;
    for (std::size_t c = 0; c < t.n_cols(); ++c) {
        if (c) out += delimiter;
        out += t.col(c).name;
    }
    out += '\n';
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        for (std::size_t c = 0; c < t.n_cols(); ++c) {
            if (c) out += delimiter;
            const auto& col = t.col(c);
            if (col.kind == column_kind::boolean)
                out += col.values[r] != 0.0 ? '1' : '0';
            else
                out += format_number(col.values[r]);
        }
        out += '\n';
    }
    return out;
}

} // namespace trex
