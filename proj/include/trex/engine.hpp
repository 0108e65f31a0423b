#pragma once

#include <algorithm>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "trex/compile.hpp"
#include "trex/nfa.hpp"
#include "trex/parse.hpp"

namespace trex {

enum class backend_kind { automaton, regex, autoselect };
enum class match_mode { disjoint, scan, all };

struct engine_config {
    backend_kind backend = backend_kind::automaton;
    match_mode mode = match_mode::disjoint;
    bool include_empty = false;
};

struct match_result {
    std::vector<match_span> spans;
    std::vector<std::string> diagnostics;
    std::string backend_used; // "nfa" or "regex"
    std::size_t n_rows = 0;
};

inline const char* to_string(match_mode m) {
    switch (m) {
    case match_mode::disjoint: return "disjoint";
    case match_mode::scan: return "scan";
    case match_mode::all: return "all";
    }
    return "?";
}

inline const char* to_string(backend_kind b) {
    switch (b) {
    case backend_kind::automaton: return "nfa";
    case backend_kind::regex: return "regex";
    case backend_kind::autoselect: return "auto";
    }
    return "?";
}

namespace detail {

inline bool contains_conj(const sere_ptr& n) {
    switch (n->k) {
    case sere_kind::conj:
        return true;
    case sere_kind::atom:
    case sere_kind::bare_repeat:
        return false;
    case sere_kind::concat:
    case sere_kind::alt:
        return contains_conj(n->lhs) || contains_conj(n->rhs);
    default:
        return contains_conj(n->lhs);
    }
}

inline std::regex host_regex(const compiled_pattern& p) {
    try {
        return std::regex(p.text, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
        throw_internal(std::string("compiled pattern rejected by the host regex engine: ") +
                       e.what());
    }
}

inline match_span span_from_bytes(const encoded_trace& et, std::size_t byte_pos,
                                  std::size_t byte_len) {
    std::size_t w = et.token_width();
    if (byte_len % w != 0)
        throw_internal("match length " + std::to_string(byte_len) +
                       " is not a whole number of row tokens");
    std::size_t start = decode_offset(et, byte_pos);
    std::size_t rows = byte_len / w;
    return {static_cast<std::int64_t>(start),
            static_cast<std::int64_t>(start + rows) - 1, rows == 0};
}

} // namespace detail

/// True when the regex backend can run the query at all: the lookahead
/// encoding of `&` consumes text differently from the intersection
/// semantics, so `&` queries are refused rather than answered differently.
inline bool regex_supported(const compiled_pattern& p) { return !p.features.lookahead; }

/// Host-engine matching over the encoded text.
///   disjoint — repeated leftmost search, resuming after each match
///   scan     — longest anchored match per starting row
///   all      — anchored test of every segment
/// Zero-length regex matches carry no rows and are dropped.
inline std::vector<match_span> regex_matches(const compiled_pattern& p, const encoded_trace& et,
                                             match_mode mode) {
    if (!regex_supported(p))
        throw_usage("the regex backend does not support '&' queries; use the nfa backend");
    if (p.atoms.size() != et.n_atoms)
        throw_internal("pattern and encoded trace disagree on atom count");

    std::regex re = detail::host_regex(p);
    std::vector<match_span> out;
    const std::size_t w = et.token_width();

    if (mode == match_mode::disjoint) {
        auto begin = std::sregex_iterator(et.text.begin(), et.text.end(), re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            if (it->length() == 0) continue;
            out.push_back(detail::span_from_bytes(et, static_cast<std::size_t>(it->position()),
                                                  static_cast<std::size_t>(it->length())));
        }
        return out;
    }

    for (std::size_t i = 0; i < et.n_rows; ++i) {
        std::int64_t best = -1;
        for (std::size_t j = i; j < et.n_rows; ++j) {
            auto first = et.text.begin() + static_cast<std::ptrdiff_t>(i * w);
            auto last = et.text.begin() + static_cast<std::ptrdiff_t>((j + 1) * w);
            if (std::regex_match(first, last, re)) {
                if (mode == match_mode::all)
                    out.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j),
                                   false});
                best = static_cast<std::int64_t>(j);
            }
        }
        if (mode == match_mode::scan && best >= 0)
            out.push_back({static_cast<std::int64_t>(i), best, false});
    }
    return out;
}

namespace detail {

inline std::vector<match_span> spans_from_matrix(const membership_matrix& m, match_mode mode) {
    std::vector<match_span> out;
    switch (mode) {
    case match_mode::all:
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::int32_t j : m[i])
                out.push_back({static_cast<std::int64_t>(i), j, false});
        break;
    case match_mode::scan:
        for (std::size_t i = 0; i < m.size(); ++i)
            if (!m[i].empty())
                out.push_back({static_cast<std::int64_t>(i), m[i].back(), false});
        break;
    case match_mode::disjoint: {
        std::int64_t pos = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (static_cast<std::int64_t>(i) < pos || m[i].empty()) continue;
            out.push_back({static_cast<std::int64_t>(i), m[i].back(), false});
            pos = m[i].back() + 1;
        }
        break;
    }
    }
    return out;
}

} // namespace detail

/// Runs the whole pipeline: define expansion, parse, desugar, atom
/// extraction, booleanization, then the selected backend and mode.
/// Results are sorted by (start, end); empty matches are reported as
/// (i, i-1) sentinel records only when `include_empty` is set.
inline match_result find_matches(const trace& t, const std::string& query,
                                 const engine_config& config = {},
                                 const std::map<std::string, std::string>& defines = {}) {
    std::string expanded = expand_defines(query, defines);
    sere_ptr ast = parse(expanded);
    sere_ptr core = desugar(ast);
    atom_table atoms = extract_atoms(core);
    bool_trace bt = booleanize(t, atoms);

    match_result result;
    result.n_rows = t.n_rows();
    result.diagnostics = bt.diagnostics;

    backend_kind chosen = config.backend;
    if (chosen == backend_kind::autoselect) {
        bool and_free = !detail::contains_conj(core);
        chosen = (and_free && atoms.size() <= 2 && t.n_rows() >= 100'000)
                     ? backend_kind::regex
                     : backend_kind::automaton;
    }

    bool is_nullable = false;
    if (chosen == backend_kind::regex) {
        compiled_pattern pattern = compile_pattern(core, atoms);
        encoded_trace et = encode(bt);
        result.spans = regex_matches(pattern, et, config.mode);
        result.backend_used = "regex";
        is_nullable = nullable(core);
    } else {
        matcher m(build_nfa(core, atoms));
        switch (config.mode) {
        case match_mode::all:
            result.spans = detail::spans_from_matrix(m.all_matches(bt), match_mode::all);
            break;
        case match_mode::scan:
            result.spans = m.scan(bt);
            break;
        case match_mode::disjoint:
            result.spans = m.disjoint(bt);
            break;
        }
        result.backend_used = "nfa";
        is_nullable = m.nullable();
    }

    if (config.include_empty && is_nullable) {
        for (std::size_t i = 0; i < t.n_rows(); ++i)
            result.spans.push_back(
                {static_cast<std::int64_t>(i), static_cast<std::int64_t>(i) - 1, true});
    }
    std::sort(result.spans.begin(), result.spans.end());
    return result;
}

} // namespace trex
