#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <vector>

#include "trex/booleanize.hpp"
#include "trex/oracle.hpp"

namespace trex {

struct match_span {
    std::int64_t start = 0;
    std::int64_t end = 0; // inclusive; empty sentinel records use start - 1
    bool empty = false;

    bool operator==(const match_span& o) const {
        return start == o.start && end == o.end && empty == o.empty;
    }
    bool operator<(const match_span& o) const {
        if (start != o.start) return start < o.start;
        return end < o.end;
    }
};

/// Nondeterministic automaton over row symbols. Transitions carry
/// propositional predicates over the atom bits instead of expanding the
/// 2^k symbol alphabet.
struct nfa {
    struct transition {
        prop pred;
        int to;
    };
    struct state {
        std::vector<int> eps;
        std::vector<transition> out;
    };
    std::vector<state> states;
    int start = 0;
    int accept = 0;
};

namespace detail {

constexpr std::size_t max_nfa_states = 2'000'000;

inline int add_state(nfa& m) {
    if (m.states.size() >= max_nfa_states)
        throw_data("match", "query expands to too many automaton states");
    m.states.emplace_back();
    return static_cast<int>(m.states.size() - 1);
}

/// Appends `src` into `dst`, returning the index offset.
inline int merge_into(nfa& dst, const nfa& src) {
    if (dst.states.size() + src.states.size() > max_nfa_states)
        throw_data("match", "query expands to too many automaton states");
    int off = static_cast<int>(dst.states.size());
    for (const auto& s : src.states) {
        nfa::state copy;
        copy.eps.reserve(s.eps.size());
        for (int e : s.eps) copy.eps.push_back(e + off);
        copy.out.reserve(s.out.size());
        for (const auto& t : s.out) copy.out.push_back({t.pred, t.to + off});
        dst.states.push_back(std::move(copy));
    }
    return off;
}

inline nfa nfa_empty() {
    nfa m;
    m.start = add_state(m);
    m.accept = add_state(m);
    m.states[m.start].eps.push_back(m.accept);
    return m;
}

inline nfa nfa_atom(prop p) {
    nfa m;
    m.start = add_state(m);
    m.accept = add_state(m);
    m.states[m.start].out.push_back({std::move(p), m.accept});
    return m;
}

inline nfa nfa_concat(nfa a, const nfa& b) {
    int off = merge_into(a, b);
    a.states[a.accept].eps.push_back(b.start + off);
    a.accept = b.accept + off;
    return a;
}

inline nfa nfa_alt(nfa a, const nfa& b) {
    int off = merge_into(a, b);
    int s = add_state(a), t = add_state(a);
    a.states[s].eps.push_back(a.start);
    a.states[s].eps.push_back(b.start + off);
    a.states[a.accept].eps.push_back(t);
    a.states[b.accept + off].eps.push_back(t);
    a.start = s;
    a.accept = t;
    return a;
}

inline nfa nfa_star(nfa a) {
    int s = add_state(a), t = add_state(a);
    a.states[s].eps.push_back(a.start);
    a.states[s].eps.push_back(t);
    a.states[a.accept].eps.push_back(a.start);
    a.states[a.accept].eps.push_back(t);
    a.start = s;
    a.accept = t;
    return a;
}

inline nfa nfa_plus(nfa a) {
    int s = add_state(a), t = add_state(a);
    a.states[s].eps.push_back(a.start);
    a.states[a.accept].eps.push_back(a.start);
    a.states[a.accept].eps.push_back(t);
    a.start = s;
    a.accept = t;
    return a;
}

/// Exactly `lo` copies, then up to (`hi` - `lo`) optional copies when
/// `bounded`, or a trailing star when not.
inline nfa nfa_repeat(const nfa& unit, std::int64_t lo, bool bounded, std::int64_t hi) {
    nfa m = nfa_empty();
    for (std::int64_t c = 0; c < lo; ++c) m = nfa_concat(std::move(m), unit);
    if (!bounded) return nfa_concat(std::move(m), nfa_star(unit));
    for (std::int64_t c = lo; c < hi; ++c) {
        // optional copy: skip edge around one more unit
        int off = merge_into(m, unit);
        int t = add_state(m);
        m.states[m.accept].eps.push_back(unit.start + off);
        m.states[m.accept].eps.push_back(t);
        m.states[unit.accept + off].eps.push_back(t);
        m.accept = t;
    }
    return m;
}

/// Epsilon-free view used for the intersection product.
struct eps_free {
    std::vector<std::vector<nfa::transition>> out;
    std::vector<bool> accepting;
    int start = 0;
};

inline void eps_closure_into(const nfa& m, int s, std::vector<int>& out,
                             std::vector<char>& seen) {
    std::fill(seen.begin(), seen.end(), 0);
    out.clear();
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        out.push_back(u);
        for (int v : m.states[u].eps) {
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
}

inline eps_free strip_epsilons(const nfa& m) {
    eps_free f;
    f.out.resize(m.states.size());
    f.accepting.assign(m.states.size(), false);
    f.start = m.start;
    std::vector<int> closure;
    std::vector<char> seen(m.states.size(), 0);
    for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
        eps_closure_into(m, s, closure, seen);
        for (int u : closure) {
            if (u == m.accept) f.accepting[s] = true;
            for (const auto& t : m.states[u].out) f.out[s].push_back(t);
        }
    }
    return f;
}

/// Intersection by pairing: both operands must consume the same rows, so a
/// product transition fires when both predicates hold.
inline nfa nfa_product(const nfa& left, const nfa& right) {
    eps_free a = strip_epsilons(left);
    eps_free b = strip_epsilons(right);

    nfa m;
    m.start = add_state(m);
    m.accept = add_state(m);
    std::map<std::pair<int, int>, int> ids;
    std::queue<std::pair<int, int>> work;

    auto state_of = [&](int x, int y) {
        auto it = ids.find({x, y});
        if (it != ids.end()) return it->second;
        int id = add_state(m);
        ids.emplace(std::make_pair(x, y), id);
        work.push({x, y});
        if (a.accepting[x] && b.accepting[y]) m.states[id].eps.push_back(m.accept);
        return id;
    };

    int first = state_of(a.start, b.start);
    m.states[m.start].eps.push_back(first);
    while (!work.empty()) {
        auto [x, y] = work.front();
        work.pop();
        int from = ids.at({x, y});
        for (const auto& ta : a.out[x]) {
            for (const auto& tb : b.out[y]) {
                int to = state_of(ta.to, tb.to); // may reallocate m.states
                m.states[from].out.push_back(
                    {prop::combine(prop::op::conj, ta.pred, tb.pred), to});
            }
        }
    }
    return m;
}

inline nfa build_nfa_node(const sere_ptr& n, const atom_table& atoms) {
    switch (n->k) {
    case sere_kind::atom:
        return nfa_atom(bind_formula(n->atom_expr, atoms));
    case sere_kind::concat:
        return nfa_concat(build_nfa_node(n->lhs, atoms), build_nfa_node(n->rhs, atoms));
    case sere_kind::alt:
        return nfa_alt(build_nfa_node(n->lhs, atoms), build_nfa_node(n->rhs, atoms));
    case sere_kind::conj:
        return nfa_product(build_nfa_node(n->lhs, atoms), build_nfa_node(n->rhs, atoms));
    case sere_kind::star:
        return nfa_star(build_nfa_node(n->lhs, atoms));
    case sere_kind::plus:
        return nfa_plus(build_nfa_node(n->lhs, atoms));
    case sere_kind::repeat_exact:
        return nfa_repeat(build_nfa_node(n->lhs, atoms), n->lo, true, n->lo);
    case sere_kind::repeat_range:
        return nfa_repeat(build_nfa_node(n->lhs, atoms), n->lo, true, n->hi);
    case sere_kind::repeat_at_least:
        return nfa_repeat(build_nfa_node(n->lhs, atoms), n->lo, false, 0);
    case sere_kind::repeat_at_most:
        return nfa_repeat(build_nfa_node(n->lhs, atoms), 0, true, n->hi);
    default:
        throw_internal("sugar node reached the automaton builder; desugar first");
    }
}

} // namespace detail

inline nfa build_nfa(const sere_ptr& desugared, const atom_table& atoms) {
    if (atoms.size() > 64)
        throw_data("match", "the automaton backend supports at most 64 distinct atoms");
    return detail::build_nfa_node(desugared, atoms);
}

/// Simulator with precomputed epsilon closures. All operations are const
/// and share no mutable state, so one matcher may serve many traces and
/// threads.
class matcher {
public:
    explicit matcher(nfa machine) : m_(std::move(machine)) {
        closures_.resize(m_.states.size());
        std::vector<int> closure;
        std::vector<char> seen(m_.states.size(), 0);
        for (int s = 0; s < static_cast<int>(m_.states.size()); ++s) {
            detail::eps_closure_into(m_, s, closure, seen);
            closures_[s] = closure;
            std::sort(closures_[s].begin(), closures_[s].end());
        }
        nullable_ = std::binary_search(closures_[m_.start].begin(), closures_[m_.start].end(),
                                       m_.accept);
    }

    const nfa& machine() const { return m_; }

    /// True when the query matches the empty segment.
    bool nullable() const { return nullable_; }

    /// Full match relation; O(n^2 * states) worst case.
    membership_matrix all_matches(const bool_trace& bt) const {
        membership_matrix out(bt.n_rows);
        std::vector<char> active(m_.states.size()), next(m_.states.size());
        for (std::size_t i = 0; i < bt.n_rows; ++i)
            run_from(bt, i, active, next, [&](std::size_t j) {
                out[i].push_back(static_cast<std::int32_t>(j));
                return true;
            });
        return out;
    }

    /// Longest match per starting row; O(n * run length) per start.
    std::vector<match_span> scan(const bool_trace& bt) const {
        std::vector<match_span> out;
        std::vector<char> active(m_.states.size()), next(m_.states.size());
        for (std::size_t i = 0; i < bt.n_rows; ++i) {
            std::int64_t best = -1;
            run_from(bt, i, active, next, [&](std::size_t j) {
                best = static_cast<std::int64_t>(j);
                return true;
            });
            if (best >= 0)
                out.push_back({static_cast<std::int64_t>(i), best, false});
        }
        return out;
    }

    /// Greedy left-to-right selection of leftmost-longest non-overlapping
    /// spans. Single forward pass with one active run per automaton state
    /// (keeping the earliest start), so long traces stay near-linear.
    std::vector<match_span> disjoint(const bool_trace& bt) const {
        std::vector<match_span> out;
        const std::int64_t n = static_cast<std::int64_t>(bt.n_rows);
        const std::int64_t none = -1;
        std::vector<std::int64_t> active(m_.states.size(), none), next(m_.states.size(), none);

        std::int64_t pos = 0;
        while (pos < n) {
            std::fill(active.begin(), active.end(), none);
            std::int64_t best_start = none, best_end = none;
            for (std::int64_t r = pos; r < n; ++r) {
                if (best_start == none) {
                    for (int u : closures_[m_.start])
                        if (active[u] == none || active[u] > r) active[u] = r;
                }
                std::uint64_t mask = bt.row_mask(static_cast<std::size_t>(r));
                std::fill(next.begin(), next.end(), none);
                bool alive = false;
                for (std::size_t s = 0; s < active.size(); ++s) {
                    std::int64_t st = active[s];
                    if (st == none) continue;
                    if (best_start != none && st > best_start) continue;
                    for (const auto& t : m_.states[s].out) {
                        if (!t.pred.eval(mask)) continue;
                        for (int u : closures_[t.to]) {
                            if (next[u] == none || next[u] > st) next[u] = st;
                        }
                        alive = true;
                    }
                }
                active.swap(next);
                std::int64_t acc = active[m_.accept];
                if (acc != none) {
                    if (best_start == none || acc < best_start) {
                        best_start = acc;
                        best_end = r;
                    } else if (acc == best_start) {
                        best_end = r;
                    }
                }
                if (!alive && best_start == none) continue; // keep injecting fresh starts
                if (best_start != none) {
                    bool pending = false;
                    for (std::size_t s = 0; s < active.size() && !pending; ++s)
                        if (active[s] != none && active[s] <= best_start) pending = true;
                    if (!pending) break;
                }
            }
            if (best_start == none) break;
            out.push_back({best_start, best_end, false});
            pos = best_end + 1;
        }
        return out;
    }

private:
    nfa m_;
    std::vector<std::vector<int>> closures_;
    bool nullable_ = false;

    /// Simulates from start row i; calls `on_accept(j)` for every j with a
    /// match over rows i..j. Stops when the state set dies out.
    template <typename F>
    void run_from(const bool_trace& bt, std::size_t i, std::vector<char>& active,
                  std::vector<char>& next, F&& on_accept) const {
        std::fill(active.begin(), active.end(), 0);
        for (int u : closures_[m_.start]) active[u] = 1;
        for (std::size_t r = i; r < bt.n_rows; ++r) {
            std::uint64_t mask = bt.row_mask(r);
            std::fill(next.begin(), next.end(), 0);
            bool alive = false;
            for (std::size_t s = 0; s < active.size(); ++s) {
                if (!active[s]) continue;
                for (const auto& t : m_.states[s].out) {
                    if (!t.pred.eval(mask)) continue;
                    for (int u : closures_[t.to]) next[u] = 1;
                    alive = true;
                }
            }
            active.swap(next);
            if (!alive) return;
            if (active[m_.accept] && !on_accept(r)) return;
        }
    }
};

/// Full membership relation computed by the automaton backend; must agree
/// pointwise with the brute-force reference.
inline membership_matrix automaton_matches(const sere_ptr& desugared, const bool_trace& bt) {
    matcher m(build_nfa(desugared, bt.atoms));
    return m.all_matches(bt);
}

} // namespace trex
