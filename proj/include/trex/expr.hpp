#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "trex/trace.hpp"

namespace trex {

enum class arith_op { add, sub, mul, div, neg };
enum class cmp_op { lt, le, gt, ge, eq, ne };
enum class logic_op { conj, disj, neg };

struct bool_expr;
using expr_ptr = std::shared_ptr<const bool_expr>;

/// One node of a boolean/arithmetic expression over trace columns. Column
/// references carry a signed row offset: `c[-1]` is the previous row, `c`
/// abbreviates `c[0]`.
struct bool_expr {
    enum class kind { number, literal, column, arith, compare, logic };

    kind k;
    double number_value = 0.0;
    bool literal_value = false;
    std::string column_name;
    std::int64_t offset = 0;
    arith_op aop{};
    cmp_op cop{};
    logic_op lop{};
    expr_ptr lhs, rhs; // rhs empty for unary nodes

    static expr_ptr number(double v) {
        auto e = std::make_shared<bool_expr>();
        e->k = kind::number;
        e->number_value = v;
        return e;
    }
    static expr_ptr literal(bool v) {
        auto e = std::make_shared<bool_expr>();
        e->k = kind::literal;
        e->literal_value = v;
        return e;
    }
    static expr_ptr column(std::string name, std::int64_t off = 0) {
        auto e = std::make_shared<bool_expr>();
        e->k = kind::column;
        e->column_name = std::move(name);
        e->offset = off;
        return e;
    }
    static expr_ptr arith(arith_op op, expr_ptr l, expr_ptr r = nullptr) {
        auto e = std::make_shared<bool_expr>();
        e->k = kind::arith;
        e->aop = op;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }
    static expr_ptr compare(cmp_op op, expr_ptr l, expr_ptr r) {
        auto e = std::make_shared<bool_expr>();
        e->k = kind::compare;
        e->cop = op;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }
    static expr_ptr logic(logic_op op, expr_ptr l, expr_ptr r = nullptr) {
        auto e = std::make_shared<bool_expr>();
        e->k = kind::logic;
        e->lop = op;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }
};

/// True when the expression is boolean-valued at its root and may stand as
/// a query atom.
inline bool is_boolean_valued(const expr_ptr& e) {
    switch (e->k) {
    case bool_expr::kind::literal:
    case bool_expr::kind::column:
    case bool_expr::kind::compare:
    case bool_expr::kind::logic:
        return true;
    default:
        return false;
    }
}

inline bool equal(const expr_ptr& a, const expr_ptr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->k != b->k) return false;
    switch (a->k) {
    case bool_expr::kind::number:
        return a->number_value == b->number_value;
    case bool_expr::kind::literal:
        return a->literal_value == b->literal_value;
    case bool_expr::kind::column:
        return a->column_name == b->column_name && a->offset == b->offset;
    case bool_expr::kind::arith:
        return a->aop == b->aop && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case bool_expr::kind::compare:
        return a->cop == b->cop && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case bool_expr::kind::logic:
        return a->lop == b->lop && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    return false;
}

namespace detail {

// Expression precedence, loosest to tightest. Used both for printing with
// minimal parentheses and (mirrored) by the parser.
enum : int {
    prec_or = 1,
    prec_and = 2,
    prec_not = 3,
    prec_cmp = 4,
    prec_add = 5,
    prec_mul = 6,
    prec_unary = 7,
    prec_primary = 8,
};

inline int expr_prec(const bool_expr& e) {
    switch (e.k) {
    case bool_expr::kind::logic:
        return e.lop == logic_op::disj ? prec_or : e.lop == logic_op::conj ? prec_and : prec_not;
    case bool_expr::kind::compare:
        return prec_cmp;
    case bool_expr::kind::arith:
        if (e.aop == arith_op::neg) return prec_unary;
        return (e.aop == arith_op::add || e.aop == arith_op::sub) ? prec_add : prec_mul;
    default:
        return prec_primary;
    }
}

inline const char* cmp_text(cmp_op op) {
    switch (op) {
    case cmp_op::lt: return "<";
    case cmp_op::le: return "<=";
    case cmp_op::gt: return ">";
    case cmp_op::ge: return ">=";
    case cmp_op::eq: return "==";
    case cmp_op::ne: return "!=";
    }
    return "?";
}

inline void print_expr(std::string& out, const expr_ptr& e, int min_prec) {
    int p = expr_prec(*e);
    bool parens = p < min_prec;
    if (parens) out += '(';
    switch (e->k) {
    case bool_expr::kind::number:
        out += format_number(e->number_value);
        break;
    case bool_expr::kind::literal:
        out += e->literal_value ? "true" : "false";
        break;
    case bool_expr::kind::column:
        out += e->column_name;
        if (e->offset != 0) {
            out += '[';
            out += std::to_string(e->offset);
            out += ']';
        }
        break;
    case bool_expr::kind::arith:
        if (e->aop == arith_op::neg) {
            out += '-';
            print_expr(out, e->lhs, prec_unary);
        } else {
            const char* sym = e->aop == arith_op::add   ? " + "
                              : e->aop == arith_op::sub ? " - "
                              : e->aop == arith_op::mul ? " * "
                                                        : " / ";
            print_expr(out, e->lhs, p);
            out += sym;
            print_expr(out, e->rhs, p + 1);
        }
        break;
    case bool_expr::kind::compare:
        print_expr(out, e->lhs, prec_add);
        out += ' ';
        out += cmp_text(e->cop);
        out += ' ';
        print_expr(out, e->rhs, prec_add);
        break;
    case bool_expr::kind::logic:
        if (e->lop == logic_op::neg) {
            out += '!';
            print_expr(out, e->lhs, prec_not);
        } else {
            print_expr(out, e->lhs, p);
            out += e->lop == logic_op::conj ? " and " : " or ";
            print_expr(out, e->rhs, p + 1);
        }
        break;
    }
    if (parens) out += ')';
}

} // namespace detail

inline std::string to_string(const expr_ptr& e) {
    std::string out;
    detail::print_expr(out, e, 0);
    return out;
}

/// Canonical text form used to deduplicate atoms: structural, with `c[0]`
/// collapsing to `c` and numbers in shortest round-trip form.
inline std::string canonical_key(const expr_ptr& e) { return to_string(e); }

} // namespace trex
