#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "trex/expr.hpp"

namespace trex {

/// Core node kinds plus the sugar forms (goto_first, nonconsec, bare_repeat)
/// that desugar() rewrites away.
enum class sere_kind {
    atom,
    concat,
    alt,  // r1 | r2
    conj, // r1 & r2 (both operands match the same segment)
    star,
    plus,
    repeat_exact,
    repeat_range,
    repeat_at_least,
    repeat_at_most,
    goto_first,  // r[->], r[->n], r[->n..m]
    nonconsec,   // r[=n], r[=n..m], r[=n..], r[=..m]
    bare_repeat, // [+], [*], [*n], [*n..m], [*n..], [*..m]
};

/// Shape of one bracketed repetition suffix.
struct repeat_spec {
    enum class form { star, plus, exact, range, at_least, at_most };
    form f = form::star;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct sere_node;
using sere_ptr = std::shared_ptr<const sere_node>;

struct sere_node {
    sere_kind k;
    expr_ptr atom_expr;  // atom
    sere_ptr lhs, rhs;   // children (rhs only for binary kinds)
    std::int64_t lo = 0; // repeat bounds for core repeat kinds
    std::int64_t hi = 0;
    repeat_spec spec{};  // payload of sugar kinds

    static sere_ptr atom(expr_ptr e) {
        auto n = std::make_shared<sere_node>();
        n->k = sere_kind::atom;
        n->atom_expr = std::move(e);
        return n;
    }
    static sere_ptr binary(sere_kind k, sere_ptr l, sere_ptr r) {
        auto n = std::make_shared<sere_node>();
        n->k = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }
    static sere_ptr concat(sere_ptr l, sere_ptr r) { return binary(sere_kind::concat, std::move(l), std::move(r)); }
    static sere_ptr alt(sere_ptr l, sere_ptr r) { return binary(sere_kind::alt, std::move(l), std::move(r)); }
    static sere_ptr conj(sere_ptr l, sere_ptr r) { return binary(sere_kind::conj, std::move(l), std::move(r)); }
    static sere_ptr unary(sere_kind k, sere_ptr c, std::int64_t lo = 0, std::int64_t hi = 0) {
        auto n = std::make_shared<sere_node>();
        n->k = k;
        n->lhs = std::move(c);
        n->lo = lo;
        n->hi = hi;
        return n;
    }
    static sere_ptr star(sere_ptr c) { return unary(sere_kind::star, std::move(c)); }
    static sere_ptr plus(sere_ptr c) { return unary(sere_kind::plus, std::move(c)); }
    static sere_ptr repeat_exact(sere_ptr c, std::int64_t n) { return unary(sere_kind::repeat_exact, std::move(c), n); }
    static sere_ptr repeat_range(sere_ptr c, std::int64_t n, std::int64_t m) { return unary(sere_kind::repeat_range, std::move(c), n, m); }
    static sere_ptr repeat_at_least(sere_ptr c, std::int64_t n) { return unary(sere_kind::repeat_at_least, std::move(c), n); }
    static sere_ptr repeat_at_most(sere_ptr c, std::int64_t m) { return unary(sere_kind::repeat_at_most, std::move(c), 0, m); }
    static sere_ptr sugar(sere_kind k, sere_ptr c, repeat_spec s) {
        auto n = std::make_shared<sere_node>();
        n->k = k;
        n->lhs = std::move(c);
        n->spec = s;
        return n;
    }
    static sere_ptr bare(repeat_spec s) {
        auto n = std::make_shared<sere_node>();
        n->k = sere_kind::bare_repeat;
        n->spec = s;
        return n;
    }
};

inline bool equal(const sere_ptr& a, const sere_ptr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->k != b->k) return false;
    switch (a->k) {
    case sere_kind::atom:
        return equal(a->atom_expr, b->atom_expr);
    case sere_kind::concat:
    case sere_kind::alt:
    case sere_kind::conj:
        return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case sere_kind::star:
    case sere_kind::plus:
        return equal(a->lhs, b->lhs);
    case sere_kind::repeat_exact:
    case sere_kind::repeat_at_least:
        return a->lo == b->lo && equal(a->lhs, b->lhs);
    case sere_kind::repeat_range:
        return a->lo == b->lo && a->hi == b->hi && equal(a->lhs, b->lhs);
    case sere_kind::repeat_at_most:
        return a->hi == b->hi && equal(a->lhs, b->lhs);
    case sere_kind::goto_first:
    case sere_kind::nonconsec:
        return a->spec.f == b->spec.f && a->spec.lo == b->spec.lo && a->spec.hi == b->spec.hi &&
               equal(a->lhs, b->lhs);
    case sere_kind::bare_repeat:
        return a->spec.f == b->spec.f && a->spec.lo == b->spec.lo && a->spec.hi == b->spec.hi;
    }
    return false;
}

inline bool is_core(const sere_ptr& n) {
    switch (n->k) {
    case sere_kind::goto_first:
    case sere_kind::nonconsec:
    case sere_kind::bare_repeat:
        return false;
    case sere_kind::atom:
        return true;
    case sere_kind::concat:
    case sere_kind::alt:
    case sere_kind::conj:
        return is_core(n->lhs) && is_core(n->rhs);
    default:
        return is_core(n->lhs);
    }
}

/// Rewrites every sugar node to core operators:
///   [+] -> true[+]            [*n] and friends -> repeats of true
///   r[->]      -> !r[*] ; r
///   r[->n]     -> !r[*] ; r[*n]
///   r[->n..m]  -> !r[*] ; r[*n..m]
///   r[=n]      -> (!r[*] ; r)[*n] ; !r[*]       (ranges analogously)
/// Idempotent; core nodes pass through structurally unchanged.
inline sere_ptr desugar(const sere_ptr& n) {
    using K = sere_kind;
    auto repeat_of = [](sere_ptr c, const repeat_spec& s) -> sere_ptr {
        switch (s.f) {
        case repeat_spec::form::star: return sere_node::star(std::move(c));
        case repeat_spec::form::plus: return sere_node::plus(std::move(c));
        case repeat_spec::form::exact: return sere_node::repeat_exact(std::move(c), s.lo);
        case repeat_spec::form::range: return sere_node::repeat_range(std::move(c), s.lo, s.hi);
        case repeat_spec::form::at_least: return sere_node::repeat_at_least(std::move(c), s.lo);
        case repeat_spec::form::at_most: return sere_node::repeat_at_most(std::move(c), s.hi);
        }
        return nullptr;
    };

    switch (n->k) {
    case K::atom:
        return n;
    case K::concat:
    case K::alt:
    case K::conj: {
        auto l = desugar(n->lhs), r = desugar(n->rhs);
        if (l == n->lhs && r == n->rhs) return n;
        return sere_node::binary(n->k, std::move(l), std::move(r));
    }
    case K::star:
    case K::plus:
    case K::repeat_exact:
    case K::repeat_range:
    case K::repeat_at_least:
    case K::repeat_at_most: {
        auto c = desugar(n->lhs);
        if (c == n->lhs) return n;
        return sere_node::unary(n->k, std::move(c), n->lo, n->hi);
    }
    case K::bare_repeat:
        return repeat_of(sere_node::atom(bool_expr::literal(true)), n->spec);
    case K::goto_first: {
        // Operand is an atom by construction.
        expr_ptr phi = n->lhs->atom_expr;
        auto not_phi = sere_node::star(sere_node::atom(bool_expr::logic(logic_op::neg, phi)));
        sere_ptr tail;
        switch (n->spec.f) {
        case repeat_spec::form::plus: tail = sere_node::atom(phi); break; // plain [->]
        case repeat_spec::form::exact: tail = sere_node::repeat_exact(sere_node::atom(phi), n->spec.lo); break;
        case repeat_spec::form::range: tail = sere_node::repeat_range(sere_node::atom(phi), n->spec.lo, n->spec.hi); break;
        default: tail = sere_node::atom(phi); break;
        }
        return sere_node::concat(std::move(not_phi), std::move(tail));
    }
    case K::nonconsec: {
        expr_ptr phi = n->lhs->atom_expr;
        auto not_phi_star = [&] {
            return sere_node::star(sere_node::atom(bool_expr::logic(logic_op::neg, phi)));
        };
        auto unit = sere_node::concat(not_phi_star(), sere_node::atom(phi));
        sere_ptr reps;
        switch (n->spec.f) {
        case repeat_spec::form::exact: reps = sere_node::repeat_exact(std::move(unit), n->spec.lo); break;
        case repeat_spec::form::range: reps = sere_node::repeat_range(std::move(unit), n->spec.lo, n->spec.hi); break;
        case repeat_spec::form::at_least: reps = sere_node::repeat_at_least(std::move(unit), n->spec.lo); break;
        case repeat_spec::form::at_most: reps = sere_node::repeat_at_most(std::move(unit), n->spec.hi); break;
        default: reps = std::move(unit); break;
        }
        return sere_node::concat(std::move(reps), not_phi_star());
    }
    }
    return n;
}

/// True when the (core) expression matches the empty segment.
inline bool nullable(const sere_ptr& n) {
    switch (n->k) {
    case sere_kind::atom: return false;
    case sere_kind::concat: return nullable(n->lhs) && nullable(n->rhs);
    case sere_kind::alt: return nullable(n->lhs) || nullable(n->rhs);
    case sere_kind::conj: return nullable(n->lhs) && nullable(n->rhs);
    case sere_kind::star: return true;
    case sere_kind::plus: return nullable(n->lhs);
    case sere_kind::repeat_exact: return n->lo == 0 || nullable(n->lhs);
    case sere_kind::repeat_range:
    case sere_kind::repeat_at_least: return n->lo == 0 || nullable(n->lhs);
    case sere_kind::repeat_at_most: return true;
    default:
        return nullable(desugar(n));
    }
}

namespace detail {

enum : int { sprec_alt = 1, sprec_conj = 2, sprec_concat = 3, sprec_rep = 4, sprec_primary = 5 };

inline int sere_prec(const sere_node& n) {
    switch (n.k) {
    case sere_kind::alt: return sprec_alt;
    case sere_kind::conj: return sprec_conj;
    case sere_kind::concat: return sprec_concat;
    case sere_kind::atom:
    case sere_kind::bare_repeat: return sprec_primary;
    default: return sprec_rep;
    }
}

inline std::string spec_suffix(const repeat_spec& s, char lead) {
    std::string out = "[";
    switch (s.f) {
    case repeat_spec::form::star: out += lead == '=' ? "=.." : std::string(1, lead); break;
    case repeat_spec::form::plus: out += lead == '-' ? "->" : "+"; break;
    case repeat_spec::form::exact:
        out += lead == '*' ? "*" : lead == '-' ? "->" : "=";
        out += std::to_string(s.lo);
        break;
    case repeat_spec::form::range:
        out += lead == '*' ? "*" : lead == '-' ? "->" : "=";
        out += std::to_string(s.lo) + ".." + std::to_string(s.hi);
        break;
    case repeat_spec::form::at_least:
        out += lead == '*' ? "*" : "=";
        out += std::to_string(s.lo) + "..";
        break;
    case repeat_spec::form::at_most:
        out += lead == '*' ? "*.." : "=..";
        out += std::to_string(s.hi);
        break;
    }
    out += ']';
    return out;
}

inline void print_sere(std::string& out, const sere_ptr& n, int min_prec);

inline void print_suffix_child(std::string& out, const sere_ptr& child) {
    if (child->k == sere_kind::atom) {
        const auto& e = child->atom_expr;
        bool simple = e->k == bool_expr::kind::column || e->k == bool_expr::kind::literal ||
                      (e->k == bool_expr::kind::logic && e->lop == logic_op::neg &&
                       (e->lhs->k == bool_expr::kind::column || e->lhs->k == bool_expr::kind::literal));
        if (simple) {
            out += to_string(e);
            return;
        }
        out += '(';
        out += to_string(e);
        out += ')';
        return;
    }
    print_sere(out, child, sprec_primary);
}

inline void print_sere(std::string& out, const sere_ptr& n, int min_prec) {
    int p = sere_prec(*n);
    bool parens = p < min_prec;
    if (parens) out += '(';
    switch (n->k) {
    case sere_kind::atom:
        out += to_string(n->atom_expr);
        break;
    case sere_kind::alt:
        print_sere(out, n->lhs, sprec_alt);
        out += " | ";
        print_sere(out, n->rhs, sprec_alt + 1);
        break;
    case sere_kind::conj:
        print_sere(out, n->lhs, sprec_conj);
        out += " & ";
        print_sere(out, n->rhs, sprec_conj + 1);
        break;
    case sere_kind::concat:
        print_sere(out, n->lhs, sprec_concat);
        out += " ; ";
        print_sere(out, n->rhs, sprec_concat + 1);
        break;
    case sere_kind::star:
        print_suffix_child(out, n->lhs);
        out += "[*]";
        break;
    case sere_kind::plus:
        print_suffix_child(out, n->lhs);
        out += "[+]";
        break;
    case sere_kind::repeat_exact:
        print_suffix_child(out, n->lhs);
        out += "[*" + std::to_string(n->lo) + "]";
        break;
    case sere_kind::repeat_range:
        print_suffix_child(out, n->lhs);
        out += "[*" + std::to_string(n->lo) + ".." + std::to_string(n->hi) + "]";
        break;
    case sere_kind::repeat_at_least:
        print_suffix_child(out, n->lhs);
        out += "[*" + std::to_string(n->lo) + "..]";
        break;
    case sere_kind::repeat_at_most:
        print_suffix_child(out, n->lhs);
        out += "[*.." + std::to_string(n->hi) + "]";
        break;
    case sere_kind::goto_first:
        print_suffix_child(out, n->lhs);
        out += spec_suffix(n->spec, '-');
        break;
    case sere_kind::nonconsec:
        print_suffix_child(out, n->lhs);
        out += spec_suffix(n->spec, '=');
        break;
    case sere_kind::bare_repeat:
        out += spec_suffix(n->spec, n->spec.f == repeat_spec::form::plus ? '+' : '*');
        break;
    }
    if (parens) out += ')';
}

} // namespace detail

inline std::string to_string(const sere_ptr& n) {
    std::string out;
    detail::print_sere(out, n, 0);
    return out;
}

} // namespace trex
