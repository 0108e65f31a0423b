#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trex/atoms.hpp"
#include "trex/trace.hpp"

namespace trex {

/// Row-major n x k bit matrix: column j holds atom j evaluated at every row.
struct bool_trace {
    std::size_t n_rows = 0;
    std::size_t n_atoms = 0;
    std::vector<std::uint8_t> bits;
    atom_table atoms;
    std::vector<std::string> diagnostics;

    bool bit(std::size_t row, std::size_t atom) const {
        return bits[row * n_atoms + atom] != 0;
    }
    std::uint64_t row_mask(std::size_t row) const {
        std::uint64_t m = 0;
        for (std::size_t j = 0; j < n_atoms; ++j)
            m |= static_cast<std::uint64_t>(bits[row * n_atoms + j]) << j;
        return m;
    }
};

/// The bit matrix rendered as text: one `(b1,...,bk)` token per row, so a
/// string engine can search it. Total length is n_rows * (2k + 1).
struct encoded_trace {
    std::string text;
    std::size_t n_atoms = 0;
    std::size_t n_rows = 0;

    std::size_t token_width() const { return 2 * n_atoms + 1; }
};

/// Result of evaluating an expression at one row.
struct eval_value {
    bool is_bool = false;
    double number = 0.0;
    bool truth = false;
    bool out_of_range = false;    // an offset reference left the trace
    bool division_by_zero = false;
};

namespace detail {

struct raw_value {
    double v = 0.0;
    bool is_bool = false;
    bool oor = false;
    bool div0 = false;
};

inline double as_number(const raw_value& r) { return r.v; } // booleans already 0/1

inline raw_value eval_raw(const expr_ptr& e, const trace& t, std::size_t row);

/// Boolean-position evaluation: out-of-range cells force the smallest
/// enclosing comparison (or bare column reference) to false; division by
/// zero forces false as well and is surfaced as a diagnostic flag.
inline raw_value eval_bool_position(const expr_ptr& e, const trace& t, std::size_t row) {
    switch (e->k) {
    case bool_expr::kind::literal:
        return {e->literal_value ? 1.0 : 0.0, true, false, false};
    case bool_expr::kind::column: {
        raw_value r = eval_raw(e, t, row);
        if (r.oor) return {0.0, true, false, false};
        return {r.v != 0.0 ? 1.0 : 0.0, true, false, false};
    }
    case bool_expr::kind::compare: {
        raw_value l = eval_raw(e->lhs, t, row);
        raw_value r = eval_raw(e->rhs, t, row);
        bool div0 = l.div0 || r.div0;
        if (l.oor || r.oor || div0) return {0.0, true, false, div0};
        bool res = false;
        switch (e->cop) {
        case cmp_op::lt: res = l.v < r.v; break;
        case cmp_op::le: res = l.v <= r.v; break;
        case cmp_op::gt: res = l.v > r.v; break;
        case cmp_op::ge: res = l.v >= r.v; break;
        case cmp_op::eq: res = l.v == r.v; break;
        case cmp_op::ne: res = l.v != r.v; break;
        }
        return {res ? 1.0 : 0.0, true, false, false};
    }
    case bool_expr::kind::logic: {
        raw_value l = eval_bool_position(e->lhs, t, row);
        if (e->lop == logic_op::neg)
            return {l.v != 0.0 ? 0.0 : 1.0, true, false, l.div0};
        raw_value r = eval_bool_position(e->rhs, t, row);
        bool div0 = l.div0 || r.div0;
        bool res = e->lop == logic_op::conj ? (l.v != 0.0 && r.v != 0.0)
                                            : (l.v != 0.0 || r.v != 0.0);
        return {res ? 1.0 : 0.0, true, false, div0};
    }
    default:
        throw_internal("numeric expression used in boolean position");
    }
}

inline raw_value eval_raw(const expr_ptr& e, const trace& t, std::size_t row) {
    switch (e->k) {
    case bool_expr::kind::number:
        return {e->number_value, false, false, false};
    case bool_expr::kind::literal:
        return {e->literal_value ? 1.0 : 0.0, true, false, false};
    case bool_expr::kind::column: {
        auto idx = t.find(e->column_name);
        if (!idx) throw_data("booleanize", "unknown column '" + e->column_name + "'");
        std::int64_t target = static_cast<std::int64_t>(row) + e->offset;
        if (target < 0 || target >= static_cast<std::int64_t>(t.n_rows()))
            return {0.0, false, true, false};
        return {t.value(*idx, static_cast<std::size_t>(target)),
                t.col(*idx).kind == column_kind::boolean, false, false};
    }
    case bool_expr::kind::arith: {
        raw_value l = eval_raw(e->lhs, t, row);
        if (e->aop == arith_op::neg)
            return {-as_number(l), false, l.oor, l.div0};
        raw_value r = eval_raw(e->rhs, t, row);
        raw_value out;
        out.oor = l.oor || r.oor;
        out.div0 = l.div0 || r.div0;
        if (out.oor || out.div0) return out;
        switch (e->aop) {
        case arith_op::add: out.v = as_number(l) + as_number(r); break;
        case arith_op::sub: out.v = as_number(l) - as_number(r); break;
        case arith_op::mul: out.v = as_number(l) * as_number(r); break;
        case arith_op::div:
            if (as_number(r) == 0.0) {
                out.div0 = true;
                return out;
            }
            out.v = as_number(l) / as_number(r);
            break;
        case arith_op::neg: break;
        }
        return out;
    }
    case bool_expr::kind::compare:
    case bool_expr::kind::logic:
        return eval_bool_position(e, t, row);
    }
    return {};
}

/// Checks every column reference against the trace before any evaluation
/// starts: names must exist, and boolean positions need boolean columns.
inline void validate_expr(const expr_ptr& e, const trace& t, bool bool_position) {
    switch (e->k) {
    case bool_expr::kind::number:
    case bool_expr::kind::literal:
        return;
    case bool_expr::kind::column: {
        auto idx = t.find(e->column_name);
        if (!idx) throw_data("booleanize", "unknown column '" + e->column_name + "'");
        if (bool_position && t.col(*idx).kind != column_kind::boolean)
            throw_data("booleanize", "column '" + e->column_name +
                                         "' is numeric; a boolean atom needs a boolean column "
                                         "(declare it with the boolean-columns option)");
        return;
    }
    case bool_expr::kind::arith:
        validate_expr(e->lhs, t, false);
        if (e->rhs) validate_expr(e->rhs, t, false);
        return;
    case bool_expr::kind::compare:
        validate_expr(e->lhs, t, false);
        validate_expr(e->rhs, t, false);
        return;
    case bool_expr::kind::logic:
        validate_expr(e->lhs, t, true);
        if (e->rhs) validate_expr(e->rhs, t, true);
        return;
    }
}

} // namespace detail

/// Evaluates one expression at one row. Boolean-rooted expressions come
/// back with `is_bool` set and the out-of-range / division-by-zero rules
/// already applied; numeric roots surface the flags instead.
inline eval_value eval_expr(const expr_ptr& e, const trace& t, std::size_t row) {
    if (row >= t.n_rows())
        throw_data("booleanize", "row index out of bounds");
    detail::validate_expr(e, t, is_boolean_valued(e));
    detail::raw_value r = is_boolean_valued(e) ? detail::eval_bool_position(e, t, row)
                                               : detail::eval_raw(e, t, row);
    eval_value out;
    out.is_bool = r.is_bool;
    out.number = r.v;
    out.truth = r.v != 0.0;
    out.out_of_range = r.oor;
    out.division_by_zero = r.div0;
    return out;
}

/// Evaluates every atom at every row. Row count is preserved; atom j fills
/// bit column j. Division-by-zero rows evaluate false and are reported in
/// `diagnostics` rather than failing the whole run.
inline bool_trace booleanize(const trace& t, const atom_table& atoms) {
    bool_trace bt;
    bt.n_rows = t.n_rows();
    bt.n_atoms = atoms.size();
    bt.atoms = atoms;
    bt.bits.assign(bt.n_rows * bt.n_atoms, 0);

    for (const auto& a : atoms.atoms) detail::validate_expr(a, t, true);

    std::vector<std::size_t> div0_count(atoms.size(), 0);
    std::vector<std::size_t> div0_first(atoms.size(), 0);
    for (std::size_t r = 0; r < bt.n_rows; ++r) {
        for (std::size_t j = 0; j < bt.n_atoms; ++j) {
            detail::raw_value v = detail::eval_bool_position(atoms.atoms[j], t, r);
            bt.bits[r * bt.n_atoms + j] = v.v != 0.0 ? 1 : 0;
            if (v.div0) {
                if (div0_count[j]++ == 0) div0_first[j] = r;
            }
        }
    }
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (!div0_count[j]) continue;
        std::string msg = "division by zero while evaluating '" + atoms.keys[j] + "' at row " +
                          std::to_string(div0_first[j]);
        if (div0_count[j] > 1)
            msg += " (and " + std::to_string(div0_count[j] - 1) + " more rows)";
        bt.diagnostics.push_back(std::move(msg));
    }
    return bt;
}

/// Renders the bit matrix as `(b1,...,bk)` row tokens. Only the ASCII
/// characters `( ) , 0 1` appear.
inline encoded_trace encode(const bool_trace& bt) {
    encoded_trace et;
    et.n_atoms = bt.n_atoms;
    et.n_rows = bt.n_rows;
    et.text.reserve(bt.n_rows * (2 * bt.n_atoms + 1));
    for (std::size_t r = 0; r < bt.n_rows; ++r) {
        et.text += '(';
        for (std::size_t j = 0; j < bt.n_atoms; ++j) {
            if (j) et.text += ',';
            et.text += bt.bit(r, j) ? '1' : '0';
        }
        et.text += ')';
    }
    return et;
}

/// Maps a byte offset in the encoded text back to its row index. Offsets
/// must sit on a token boundary; anything else is an engine bug.
inline std::size_t decode_offset(const encoded_trace& et, std::size_t byte_offset) {
    std::size_t w = et.token_width();
    if (byte_offset > et.text.size() || byte_offset % w != 0)
        throw_internal("match offset " + std::to_string(byte_offset) +
                       " is not aligned to a row token");
    return byte_offset / w;
}

} // namespace trex
