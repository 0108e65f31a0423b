#pragma once

#include <cstdint>
#include <string>

#include "trex/atoms.hpp"
#include "trex/booleanize.hpp"

namespace trex {

struct pattern_features {
    bool alternation = false;
    bool quantifier = false;
    bool lookahead = false;
};

/// A query compiled to a textual regular expression over encoded row
/// tokens, together with the atom ordering it was compiled against. The
/// pattern uses only escaped `\( \)` literals, `,` and digits, grouping,
/// `|`, the standard quantifiers and — only when `&` occurs in the query —
/// positive lookahead.
struct compiled_pattern {
    std::string text;
    atom_table atoms;
    pattern_features features;
};

namespace detail {

constexpr std::size_t max_pattern_atoms = 16; // the alternation grows as 2^k

/// Renders the row token for one truth assignment, parentheses escaped.
inline std::string assignment_token(std::uint64_t row_bits, std::size_t k) {
    std::string out = "\\(";
    for (std::size_t j = 0; j < k; ++j) {
        if (j) out += ',';
        out += ((row_bits >> j) & 1u) ? '1' : '0';
    }
    out += "\\)";
    return out;
}

/// Row token that can never occur in an encoded trace (digit 2), used for
/// formulas with no satisfying assignment so the branch matches nothing
/// while keeping full token width.
inline std::string impossible_token(std::size_t k) {
    std::string out = "\\(";
    for (std::size_t j = 0; j < k; ++j) {
        if (j) out += ',';
        out += '2';
    }
    out += "\\)";
    return out;
}

inline std::string alternation_of(const prop& formula, std::size_t k, pattern_features& feat) {
    if (k > max_pattern_atoms)
        throw_data("compile", "pattern compilation supports at most " +
                                  std::to_string(max_pattern_atoms) + " distinct atoms");
    std::string out = "(";
    std::size_t terms = 0;
    // Enumerate assignments in binary counting order, atom 0 most significant.
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
        std::uint64_t row_bits = 0;
        for (std::size_t j = 0; j < k; ++j)
            row_bits |= ((a >> (k - 1 - j)) & 1u) << j;
        if (!formula.eval(row_bits)) continue;
        if (terms++) {
            out += '|';
            feat.alternation = true;
        }
        out += assignment_token(row_bits, k);
    }
    if (terms == 0) out += impossible_token(k);
    out += ')';
    return out;
}

inline std::string compile_node(const sere_ptr& n, const atom_table& atoms,
                                pattern_features& feat) {
    switch (n->k) {
    case sere_kind::atom:
        return alternation_of(bind_formula(n->atom_expr, atoms), atoms.size(), feat);
    case sere_kind::concat:
        return "(" + compile_node(n->lhs, atoms, feat) + compile_node(n->rhs, atoms, feat) + ")";
    case sere_kind::alt:
        feat.alternation = true;
        return "(" + compile_node(n->lhs, atoms, feat) + "|" + compile_node(n->rhs, atoms, feat) +
               ")";
    case sere_kind::conj: {
        feat.lookahead = true;
        feat.alternation = true;
        std::string s1 = compile_node(n->lhs, atoms, feat);
        std::string s2 = compile_node(n->rhs, atoms, feat);
        std::string left = "((?=" + s1 + ")" + s2 + ")";
        std::string right = "((?=" + s2 + ")" + s1 + ")";
        return "(" + left + "|" + right + ")";
    }
    case sere_kind::star:
        feat.quantifier = true;
        return "(" + compile_node(n->lhs, atoms, feat) + "*)";
    case sere_kind::plus:
        feat.quantifier = true;
        return "(" + compile_node(n->lhs, atoms, feat) + "+)";
    case sere_kind::repeat_exact:
        feat.quantifier = true;
        return "((" + compile_node(n->lhs, atoms, feat) + "){" + std::to_string(n->lo) + "})";
    case sere_kind::repeat_range:
        feat.quantifier = true;
        return "((" + compile_node(n->lhs, atoms, feat) + "){" + std::to_string(n->lo) + "," +
               std::to_string(n->hi) + "})";
    case sere_kind::repeat_at_least:
        feat.quantifier = true;
        return "((" + compile_node(n->lhs, atoms, feat) + "){" + std::to_string(n->lo) + ",})";
    case sere_kind::repeat_at_most:
        feat.quantifier = true;
        return "((" + compile_node(n->lhs, atoms, feat) + "){0," + std::to_string(n->hi) + "})";
    default:
        throw_internal("sugar node reached the pattern compiler; desugar first");
    }
}

} // namespace detail

/// Alternation fragment for a single table atom (or its negation when
/// `negated`): the disjunction of all row tokens whose bit j is 1 (or 0).
inline std::string atom_alternation(std::size_t atom_index, const atom_table& atoms,
                                    bool negated = false) {
    pattern_features feat;
    prop p = prop::leaf(static_cast<int>(atom_index));
    if (negated) p = prop::negate(std::move(p));
    return detail::alternation_of(p, atoms.size(), feat);
}

/// Structural compilation of a desugared query to a pattern string:
/// concatenation juxtaposes, `|` alternates, `&` becomes the two-branch
/// lookahead form, repeats map onto `* + {n} {n,m} {n,} {0,m}`. Output is
/// byte-deterministic for a given (query, atom table).
inline compiled_pattern compile_pattern(const sere_ptr& desugared, const atom_table& atoms) {
    compiled_pattern out;
    out.atoms = atoms;
    out.text = detail::compile_node(desugared, atoms, out.features);
    return out;
}

} // namespace trex
