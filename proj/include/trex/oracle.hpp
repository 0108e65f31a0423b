#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "trex/booleanize.hpp"

namespace trex {

/// Ends-per-start view of the full match relation: entry i lists every j
/// with i <= j < n_rows such that rows i..j match, sorted ascending.
using membership_matrix = std::vector<std::vector<std::int32_t>>;

/// Brute-force recursive matcher, straight from the operator definitions:
/// an atom matches a single satisfying row, concatenation tries every
/// split point, `&` requires both operands over the same segment, and the
/// repetitions unfold by counted concatenation. Exponential blowup is
/// acceptable here; this is the reference the fast backends are tested
/// against, so it deliberately shares nothing with them.
class oracle {
public:
    oracle(sere_ptr core, const bool_trace& bt) : root_(std::move(core)), bt_(&bt) {
        bind(root_);
    }

    /// Segment i..j inclusive; the empty segment at position i is (i, i-1).
    bool matches(std::int64_t i, std::int64_t j) { return eval(root_.get(), -1, i, j); }

    membership_matrix matrix() {
        membership_matrix m(bt_->n_rows);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(bt_->n_rows); ++i)
            for (std::int64_t j = i; j < static_cast<std::int64_t>(bt_->n_rows); ++j)
                if (matches(i, j)) m[i].push_back(static_cast<std::int32_t>(j));
        return m;
    }

private:
    struct key {
        const void* node;
        std::int64_t count, i, j;
        bool operator==(const key& o) const {
            return node == o.node && count == o.count && i == o.i && j == o.j;
        }
    };
    struct key_hash {
        std::size_t operator()(const key& k) const {
            std::size_t h = std::hash<const void*>()(k.node);
            h = h * 1000003u ^ static_cast<std::size_t>(k.count + 1);
            h = h * 1000003u ^ static_cast<std::size_t>(k.i + 1);
            h = h * 1000003u ^ static_cast<std::size_t>(k.j + 1);
            return h;
        }
    };

    sere_ptr root_;
    const bool_trace* bt_;
    std::unordered_map<const sere_node*, prop> formulas_;
    std::unordered_map<key, bool, key_hash> memo_;

    void bind(const sere_ptr& n) {
        if (n->k == sere_kind::atom) {
            formulas_.emplace(n.get(), bind_formula(n->atom_expr, bt_->atoms));
            return;
        }
        if (n->lhs) bind(n->lhs);
        if (n->rhs) bind(n->rhs);
    }

    bool row_satisfies(const sere_node* n, std::int64_t row) const {
        return formulas_.at(n).eval(bt_->row_mask(static_cast<std::size_t>(row)));
    }

    // `count` >= 0 asks for exactly `count` concatenations of the node;
    // -1 evaluates the node itself.
    bool eval(const sere_node* n, std::int64_t count, std::int64_t i, std::int64_t j) {
        if (j < i - 1) return false;
        key k{n, count, i, j};
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        bool r = compute(n, count, i, j);
        memo_.emplace(k, r);
        return r;
    }

    bool compute(const sere_node* n, std::int64_t count, std::int64_t i, std::int64_t j) {
        if (count >= 0) {
            if (count == 0) return j == i - 1;
            for (std::int64_t m = i - 1; m <= j; ++m)
                if (eval(n, -1, i, m) && eval(n, count - 1, m + 1, j)) return true;
            return false;
        }
        switch (n->k) {
        case sere_kind::atom:
            return i == j && row_satisfies(n, i);
        case sere_kind::concat:
            for (std::int64_t m = i - 1; m <= j; ++m)
                if (eval(n->lhs.get(), -1, i, m) && eval(n->rhs.get(), -1, m + 1, j)) return true;
            return false;
        case sere_kind::alt:
            return eval(n->lhs.get(), -1, i, j) || eval(n->rhs.get(), -1, i, j);
        case sere_kind::conj:
            return eval(n->lhs.get(), -1, i, j) && eval(n->rhs.get(), -1, i, j);
        case sere_kind::star:
            return star(n->lhs.get(), i, j);
        case sere_kind::plus:
            // r[+] = r ; r[*]
            for (std::int64_t m = i - 1; m <= j; ++m)
                if (eval(n->lhs.get(), -1, i, m) && star(n->lhs.get(), m + 1, j)) return true;
            return false;
        case sere_kind::repeat_exact:
            return eval(n->lhs.get(), n->lo, i, j);
        case sere_kind::repeat_range:
            for (std::int64_t c = n->lo; c <= n->hi; ++c)
                if (eval(n->lhs.get(), c, i, j)) return true;
            return false;
        case sere_kind::repeat_at_least:
            // n copies, then any number more.
            for (std::int64_t m = i - 1; m <= j; ++m)
                if (eval(n->lhs.get(), n->lo, i, m) && star(n->lhs.get(), m + 1, j)) return true;
            return false;
        case sere_kind::repeat_at_most:
            for (std::int64_t c = 0; c <= n->hi; ++c)
                if (eval(n->lhs.get(), c, i, j)) return true;
            return false;
        default:
            throw_internal("sugar node reached the oracle; desugar first");
        }
    }

    // Zero or more concatenations. Any star match decomposes into
    // non-empty chunks, so the first chunk may end anywhere in [i, j].
    bool star(const sere_node* child, std::int64_t i, std::int64_t j) {
        if (j == i - 1) return true;
        key k{child, -2, i, j};
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        bool r = false;
        for (std::int64_t m = i; m <= j && !r; ++m)
            if (eval(child, -1, i, m) && star(child, m + 1, j)) r = true;
        memo_.emplace(k, r);
        return r;
    }
};

/// One-shot convenience wrapper over `oracle`.
inline bool oracle_matches(const sere_ptr& core, const bool_trace& bt, std::int64_t i,
                           std::int64_t j) {
    oracle o(core, bt);
    return o.matches(i, j);
}

inline membership_matrix oracle_matrix(const sere_ptr& core, const bool_trace& bt) {
    oracle o(core, bt);
    return o.matrix();
}

} // namespace trex
