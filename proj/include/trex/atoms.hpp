#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "trex/sere.hpp"

namespace trex {

/// The distinct boolean atoms of a query, in order of first occurrence.
/// Atoms are the comparison-level units: comparisons, bare column
/// references and boolean literals. Propositional negation and and/or over
/// atoms do not create new entries, so `!a` and `a` share one atom.
struct atom_table {
    std::vector<expr_ptr> atoms;
    std::vector<std::string> keys; // canonical text, parallel to atoms

    std::size_t size() const { return atoms.size(); }

    int index_of(const std::string& key) const {
        auto it = index_.find(key);
        return it == index_.end() ? -1 : static_cast<int>(it->second);
    }

    int add(const expr_ptr& e) {
        std::string key = canonical_key(e);
        auto it = index_.find(key);
        if (it != index_.end()) return static_cast<int>(it->second);
        std::size_t id = atoms.size();
        atoms.push_back(e);
        keys.push_back(key);
        index_.emplace(std::move(key), id);
        return static_cast<int>(id);
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline bool is_prop_connective(const expr_ptr& e) {
    return e->k == bool_expr::kind::logic;
}

inline void collect_atoms(const expr_ptr& e, atom_table& table) {
    if (is_prop_connective(e)) {
        collect_atoms(e->lhs, table);
        if (e->rhs) collect_atoms(e->rhs, table);
        return;
    }
    table.add(e);
}

inline void collect_atoms(const sere_ptr& n, atom_table& table) {
    switch (n->k) {
    case sere_kind::atom:
        collect_atoms(n->atom_expr, table);
        return;
    case sere_kind::concat:
    case sere_kind::alt:
    case sere_kind::conj:
        collect_atoms(n->lhs, table);
        collect_atoms(n->rhs, table);
        return;
    case sere_kind::bare_repeat:
        return;
    default:
        collect_atoms(n->lhs, table);
        return;
    }
}

} // namespace detail

/// Collects the ordered, deduplicated atom list of a desugared query.
/// Queries with no atoms of their own get the constant `true`, so the
/// table is never empty.
inline atom_table extract_atoms(const sere_ptr& desugared) {
    atom_table table;
    detail::collect_atoms(desugared, table);
    if (table.size() == 0) table.add(bool_expr::literal(true));
    return table;
}

/// Propositional view of one query leaf: the same formula with atoms
/// replaced by their table indices, evaluable against a row's bit vector.
struct prop {
    enum class op { atom, negate, conj, disj };
    op o = op::atom;
    int atom = -1;
    std::vector<prop> kids;

    bool eval(std::uint64_t row_bits) const {
        switch (o) {
        case op::atom: return (row_bits >> atom) & 1u;
        case op::negate: return !kids[0].eval(row_bits);
        case op::conj: return kids[0].eval(row_bits) && kids[1].eval(row_bits);
        case op::disj: return kids[0].eval(row_bits) || kids[1].eval(row_bits);
        }
        return false;
    }

    static prop leaf(int idx) {
        prop p;
        p.o = op::atom;
        p.atom = idx;
        return p;
    }
    static prop negate(prop c) {
        prop p;
        p.o = op::negate;
        p.kids.push_back(std::move(c));
        return p;
    }
    static prop combine(op o, prop a, prop b) {
        prop p;
        p.o = o;
        p.kids.push_back(std::move(a));
        p.kids.push_back(std::move(b));
        return p;
    }
};

/// Maps a query leaf formula onto atom indices of `table`. Every
/// comparison-level unit must already be present in the table.
inline prop bind_formula(const expr_ptr& e, const atom_table& table) {
    if (detail::is_prop_connective(e)) {
        if (e->lop == logic_op::neg) return prop::negate(bind_formula(e->lhs, table));
        prop::op o = e->lop == logic_op::conj ? prop::op::conj : prop::op::disj;
        return prop::combine(o, bind_formula(e->lhs, table), bind_formula(e->rhs, table));
    }
    int idx = table.index_of(canonical_key(e));
    if (idx < 0) throw_internal("atom '" + canonical_key(e) + "' missing from atom table");
    return prop::leaf(idx);
}

} // namespace trex
