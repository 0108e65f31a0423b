#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "trex/sere.hpp"

namespace trex {

namespace detail {

enum class tok {
    ident, number,
    kw_and, kw_or, kw_not, kw_true, kw_false,
    lparen, rparen, lbracket, rbracket,
    semicolon, pipe, amp, bang,
    plus, minus, star, slash,
    lt, le, gt, ge, eq_eq, ne, eq,
    arrow, dotdot,
    end,
};

struct token {
    tok k;
    std::string text;
    double num = 0.0;
    bool integral = false;
    std::size_t pos = 0;
};

inline std::vector<token> lex_query(const std::string& s) {
    std::vector<token> out;
    std::size_t i = 0;
    auto push = [&](tok k, std::size_t at, std::string text = {}) {
        out.push_back({k, std::move(text), 0.0, false, at});
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        std::size_t at = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            std::string word = s.substr(b, i - b);
            if (word == "and") push(tok::kw_and, at);
            else if (word == "or") push(tok::kw_or, at);
            else if (word == "not") push(tok::kw_not, at);
            else if (word == "true") push(tok::kw_true, at);
            else if (word == "false") push(tok::kw_false, at);
            else push(tok::ident, at, std::move(word));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = i;
            bool integral = true;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                integral = false;
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    integral = false;
                    i = j;
                    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                }
            }
            token t{tok::number, s.substr(b, i - b), 0.0, integral, at};
            t.num = std::strtod(t.text.c_str(), nullptr);
            out.push_back(std::move(t));
            continue;
        }
        auto two = [&](char a, char b2) {
            return c == a && i + 1 < s.size() && s[i + 1] == b2;
        };
        if (two('<', '=')) { push(tok::le, at); i += 2; continue; }
        if (two('>', '=')) { push(tok::ge, at); i += 2; continue; }
        if (two('=', '=')) { push(tok::eq_eq, at); i += 2; continue; }
        if (two('!', '=')) { push(tok::ne, at); i += 2; continue; }
        if (two('-', '>')) { push(tok::arrow, at); i += 2; continue; }
        if (two('.', '.')) { push(tok::dotdot, at); i += 2; continue; }
        switch (c) {
        case '(': push(tok::lparen, at); break;
        case ')': push(tok::rparen, at); break;
        case '[': push(tok::lbracket, at); break;
        case ']': push(tok::rbracket, at); break;
        case ';': push(tok::semicolon, at); break;
        case '|': push(tok::pipe, at); break;
        case '&': push(tok::amp, at); break;
        case '!': push(tok::bang, at); break;
        case '+': push(tok::plus, at); break;
        case '-': push(tok::minus, at); break;
        case '*': push(tok::star, at); break;
        case '/': push(tok::slash, at); break;
        case '<': push(tok::lt, at); break;
        case '>': push(tok::gt, at); break;
        case '=': push(tok::eq, at); break;
        default:
            throw_parse(std::string("unexpected character '") + c + "'", at);
        }
        ++i;
    }
    out.push_back({tok::end, "", 0.0, false, s.size()});
    return out;
}

// Value category tracked while parsing expressions. Column references are
// polymorphic until a trace supplies their kind.
enum class ety { num, lit_bool, op_bool, column };

inline bool arith_ok(ety t) { return t != ety::op_bool; }
inline bool bool_ok(ety t) { return t != ety::num; }

class parser {
public:
    explicit parser(const std::string& text) : toks_(lex_query(text)) {}

    sere_ptr parse_query() {
        auto n = parse_sere();
        expect_end();
        return n;
    }

    expr_ptr parse_expression() {
        auto [e, t] = parse_or();
        expect_end();
        (void)t;
        return e;
    }

private:
    std::vector<token> toks_;
    std::size_t idx_ = 0;

    const token& cur() const { return toks_[idx_]; }
    const token& peek(std::size_t n = 1) const {
        std::size_t i = idx_ + n;
        return toks_[i < toks_.size() ? i : toks_.size() - 1];
    }
    const token& take() { return toks_[idx_++]; }
    bool at(tok k) const { return cur().k == k; }
    bool accept(tok k) {
        if (!at(k)) return false;
        ++idx_;
        return true;
    }
    void expect(tok k, const char* what) {
        if (!accept(k)) throw_parse(std::string("expected ") + what, cur().pos);
    }
    void expect_end() {
        if (!at(tok::end)) throw_parse("unexpected trailing input", cur().pos);
    }

    // ---- expressions -----------------------------------------------------

    using typed = std::pair<expr_ptr, ety>;

    typed parse_or() {
        auto l = parse_and();
        while (at(tok::kw_or)) {
            std::size_t p = take().pos;
            auto r = parse_and();
            require_bool(l, p, "'or'");
            require_bool(r, p, "'or'");
            l = {bool_expr::logic(logic_op::disj, l.first, r.first), ety::op_bool};
        }
        return l;
    }

    typed parse_and() {
        auto l = parse_not();
        while (at(tok::kw_and)) {
            std::size_t p = take().pos;
            auto r = parse_not();
            require_bool(l, p, "'and'");
            require_bool(r, p, "'and'");
            l = {bool_expr::logic(logic_op::conj, l.first, r.first), ety::op_bool};
        }
        return l;
    }

    typed parse_not() {
        if (at(tok::kw_not) || at(tok::bang)) {
            std::size_t p = take().pos;
            auto v = parse_not();
            require_bool(v, p, "negation");
            return {bool_expr::logic(logic_op::neg, v.first), ety::op_bool};
        }
        return parse_cmp();
    }

    typed parse_cmp() {
        auto l = parse_add();
        cmp_op op;
        if (at(tok::lt)) op = cmp_op::lt;
        else if (at(tok::le)) op = cmp_op::le;
        else if (at(tok::gt)) op = cmp_op::gt;
        else if (at(tok::ge)) op = cmp_op::ge;
        else if (at(tok::eq_eq)) op = cmp_op::eq;
        else if (at(tok::ne)) op = cmp_op::ne;
        else return l;
        std::size_t p = take().pos;
        auto r = parse_add();
        require_arith(l, p, "comparison");
        require_arith(r, p, "comparison");
        if (at(tok::lt) || at(tok::le) || at(tok::gt) || at(tok::ge) || at(tok::eq_eq) || at(tok::ne))
            throw_parse("chained comparisons are not supported", cur().pos);
        return {bool_expr::compare(op, l.first, r.first), ety::op_bool};
    }

    typed parse_add() {
        auto l = parse_mul();
        while (at(tok::plus) || at(tok::minus)) {
            arith_op op = at(tok::plus) ? arith_op::add : arith_op::sub;
            std::size_t p = take().pos;
            auto r = parse_mul();
            require_arith(l, p, "arithmetic");
            require_arith(r, p, "arithmetic");
            l = {bool_expr::arith(op, l.first, r.first), ety::num};
        }
        return l;
    }

    typed parse_mul() {
        auto l = parse_unary();
        while (at(tok::star) || at(tok::slash)) {
            arith_op op = at(tok::star) ? arith_op::mul : arith_op::div;
            std::size_t p = take().pos;
            auto r = parse_unary();
            require_arith(l, p, "arithmetic");
            require_arith(r, p, "arithmetic");
            l = {bool_expr::arith(op, l.first, r.first), ety::num};
        }
        return l;
    }

    typed parse_unary() {
        if (at(tok::minus)) {
            std::size_t p = take().pos;
            auto v = parse_unary();
            require_arith(v, p, "unary minus");
            if (v.first->k == bool_expr::kind::number) // fold signed literals
                return {bool_expr::number(-v.first->number_value), ety::num};
            return {bool_expr::arith(arith_op::neg, v.first), ety::num};
        }
        return parse_expr_primary();
    }

    typed parse_expr_primary() {
        if (at(tok::number)) {
            const token& t = take();
            return {bool_expr::number(t.num), ety::num};
        }
        if (at(tok::kw_true)) { take(); return {bool_expr::literal(true), ety::lit_bool}; }
        if (at(tok::kw_false)) { take(); return {bool_expr::literal(false), ety::lit_bool}; }
        if (at(tok::ident)) {
            token t = take();
            std::int64_t off = 0;
            if (at(tok::lbracket) && offset_shaped()) {
                take(); // '['
                std::int64_t sign = 1;
                if (accept(tok::minus)) sign = -1;
                else accept(tok::plus);
                const token& num = cur();
                if (!at(tok::number) || !num.integral)
                    throw_parse("column offset must be an integer", num.pos);
                off = sign * static_cast<std::int64_t>(take().num);
                expect(tok::rbracket, "']'");
            }
            return {bool_expr::column(t.text, off), ety::column};
        }
        if (at(tok::lparen)) {
            take();
            auto v = parse_or();
            expect(tok::rparen, "')'");
            return v;
        }
        throw_parse("expected an expression", cur().pos);
    }

    // A '[' after a column name opens an offset only when it wraps a signed
    // integer; repetition suffixes start with '*', '+', '->' or '='.
    bool offset_shaped() const {
        const token& a = peek(1);
        if (a.k == tok::number) return true;
        if (a.k == tok::minus || a.k == tok::plus) return peek(2).k == tok::number;
        return false;
    }

    void require_bool(const typed& v, std::size_t pos, const char* what) {
        if (!bool_ok(v.second))
            throw_parse(std::string("operand of ") + what + " must be boolean-valued", pos);
    }
    void require_arith(const typed& v, std::size_t pos, const char* what) {
        if (!arith_ok(v.second))
            throw_parse(std::string(what) + " over a boolean operator result is not allowed", pos);
    }

    // ---- SERE level ------------------------------------------------------

    sere_ptr parse_sere() {
        auto l = parse_and_sere();
        while (accept(tok::pipe)) l = sere_node::alt(std::move(l), parse_and_sere());
        return l;
    }

    sere_ptr parse_and_sere() {
        auto l = parse_cat();
        while (accept(tok::amp)) l = sere_node::conj(std::move(l), parse_cat());
        return l;
    }

    sere_ptr parse_cat() {
        auto l = parse_rep();
        while (accept(tok::semicolon)) l = sere_node::concat(std::move(l), parse_rep());
        return l;
    }

    bool suffix_shaped() const {
        if (!at(tok::lbracket)) return false;
        tok n = peek(1).k;
        return n == tok::star || n == tok::plus || n == tok::arrow || n == tok::eq;
    }

    sere_ptr parse_rep() {
        auto n = parse_primary();
        while (suffix_shaped()) n = apply_suffix(std::move(n));
        return n;
    }

    std::int64_t parse_bound() {
        const token& t = cur();
        if (!at(tok::number) || !t.integral)
            throw_parse("repetition bound must be a non-negative integer", t.pos);
        return static_cast<std::int64_t>(take().num);
    }

    // Reads the bracketed body of a '[*...]' or '[+]' repetition.
    repeat_spec parse_star_spec() {
        repeat_spec s;
        if (accept(tok::plus)) {
            s.f = repeat_spec::form::plus;
            expect(tok::rbracket, "']'");
            return s;
        }
        expect(tok::star, "'*' or '+'");
        if (accept(tok::rbracket)) {
            s.f = repeat_spec::form::star;
            return s;
        }
        if (accept(tok::dotdot)) {
            s.f = repeat_spec::form::at_most;
            s.hi = parse_bound();
            expect(tok::rbracket, "']'");
            return s;
        }
        std::size_t lo_pos = cur().pos;
        s.lo = parse_bound();
        if (accept(tok::rbracket)) {
            s.f = repeat_spec::form::exact;
            return s;
        }
        expect(tok::dotdot, "'..' or ']'");
        if (accept(tok::rbracket)) {
            s.f = repeat_spec::form::at_least;
            return s;
        }
        s.f = repeat_spec::form::range;
        s.hi = parse_bound();
        if (s.lo > s.hi)
            throw_parse("repetition range has lower bound greater than upper bound", lo_pos);
        expect(tok::rbracket, "']'");
        return s;
    }

    sere_ptr apply_suffix(sere_ptr base) {
        std::size_t open = cur().pos;
        expect(tok::lbracket, "'['");
        if (at(tok::star) || at(tok::plus)) {
            repeat_spec s = parse_star_spec();
            switch (s.f) {
            case repeat_spec::form::star: return sere_node::star(std::move(base));
            case repeat_spec::form::plus: return sere_node::plus(std::move(base));
            case repeat_spec::form::exact: return sere_node::repeat_exact(std::move(base), s.lo);
            case repeat_spec::form::range: return sere_node::repeat_range(std::move(base), s.lo, s.hi);
            case repeat_spec::form::at_least: return sere_node::repeat_at_least(std::move(base), s.lo);
            case repeat_spec::form::at_most: return sere_node::repeat_at_most(std::move(base), s.hi);
            }
        }
        if (accept(tok::arrow)) {
            require_atom_operand(base, open, "[->]");
            repeat_spec s;
            s.f = repeat_spec::form::plus; // encodes the bare [->]
            if (!accept(tok::rbracket)) {
                std::size_t lo_pos = cur().pos;
                s.lo = parse_bound();
                s.f = repeat_spec::form::exact;
                if (accept(tok::dotdot)) {
                    s.f = repeat_spec::form::range;
                    s.hi = parse_bound();
                    if (s.lo > s.hi)
                        throw_parse("repetition range has lower bound greater than upper bound",
                                    lo_pos);
                }
                expect(tok::rbracket, "']'");
            }
            return sere_node::sugar(sere_kind::goto_first, std::move(base), s);
        }
        if (accept(tok::eq)) {
            require_atom_operand(base, open, "[=]");
            repeat_spec s;
            if (accept(tok::dotdot)) {
                s.f = repeat_spec::form::at_most;
                s.hi = parse_bound();
                expect(tok::rbracket, "']'");
                return sere_node::sugar(sere_kind::nonconsec, std::move(base), s);
            }
            std::size_t lo_pos = cur().pos;
            s.lo = parse_bound();
            s.f = repeat_spec::form::exact;
            if (accept(tok::dotdot)) {
                if (accept(tok::rbracket)) {
                    s.f = repeat_spec::form::at_least;
                    return sere_node::sugar(sere_kind::nonconsec, std::move(base), s);
                }
                s.f = repeat_spec::form::range;
                s.hi = parse_bound();
                if (s.lo > s.hi)
                    throw_parse("repetition range has lower bound greater than upper bound", lo_pos);
            }
            expect(tok::rbracket, "']'");
            return sere_node::sugar(sere_kind::nonconsec, std::move(base), s);
        }
        throw_parse("malformed repetition suffix", cur().pos);
    }

    void require_atom_operand(const sere_ptr& base, std::size_t pos, const char* op) {
        if (base->k != sere_kind::atom)
            throw_parse(std::string(op) + " applies to a boolean atom, not a general query", pos);
    }

    sere_ptr parse_primary() {
        if (at(tok::lbracket)) {
            // Bare repetition: [*...] / [+]. Goto and [=] need an operand.
            tok n = peek(1).k;
            if (n == tok::arrow || n == tok::eq)
                throw_parse("repetition suffix without an operand", cur().pos);
            take();
            repeat_spec s = parse_star_spec();
            return sere_node::bare(s);
        }
        if (at(tok::lparen)) {
            // A parenthesized group that reads as a plain expression is an
            // atom; anything else re-parses as a grouped sub-query.
            std::size_t save = idx_;
            try {
                auto v = parse_expr_primary_paren();
                return sere_node::atom(v);
            } catch (const error&) {
                idx_ = save;
            }
            expect(tok::lparen, "'('");
            auto s = parse_sere();
            expect(tok::rparen, "')'");
            return s;
        }
        std::size_t pos = cur().pos;
        auto v = parse_or();
        if (!bool_ok(v.second))
            throw_parse("query atom must be boolean-valued", pos);
        return sere_node::atom(v.first);
    }

    // Parses a full expression that starts at '(' — used to try the
    // atom interpretation of a parenthesized group. The expression may
    // continue past the closing parenthesis, e.g. `(a) + 1 > 0`.
    expr_ptr parse_expr_primary_paren() {
        std::size_t pos = cur().pos;
        auto v = parse_or();
        if (!bool_ok(v.second))
            throw_parse("query atom must be boolean-valued", pos);
        return v.first;
    }
};

} // namespace detail

/// Parses a query into its syntax tree, sugar operators preserved.
inline sere_ptr parse(const std::string& query) {
    if (query.find_first_not_of(" \t\r\n") == std::string::npos)
        throw_parse("empty query", 0);
    detail::parser p(query);
    return p.parse_query();
}

/// Parses a standalone boolean/arithmetic expression (no SERE operators).
inline expr_ptr parse_expression(const std::string& text) {
    detail::parser p(text);
    return p.parse_expression();
}

/// Expands `$name` references by textual substitution of the parenthesized
/// definition body, to fixpoint. Cycles and unknown names are errors.
inline std::string expand_defines(const std::string& query,
                                  const std::map<std::string, std::string>& defines) {
    std::set<std::string> active;

    auto expand = [&](auto&& self, const std::string& text) -> std::string {
        std::string out;
        std::size_t i = 0;
        while (i < text.size()) {
            if (text[i] != '$') {
                out += text[i++];
                continue;
            }
            std::size_t at = i++;
            std::size_t b = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            std::string name = text.substr(b, i - b);
            if (name.empty())
                throw error(error::kind::parse, "define", "stray '$' in query", at);
            auto it = defines.find(name);
            if (it == defines.end())
                throw error(error::kind::parse, "define", "undefined name '$" + name + "'", at);
            if (!active.insert(name).second)
                throw error(error::kind::parse, "define",
                            "cyclic definition of '$" + name + "'", at);
            out += '(';
            out += self(self, it->second);
            out += ')';
            active.erase(name);
        }
        return out;
    };

    return expand(expand, query);
}

} // namespace trex
