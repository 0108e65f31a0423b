#include <doctest.h>

#include "trex/oracle.hpp"
#include "trex/parse.hpp"

using namespace trex;

namespace {

// Builds a bool_trace directly from bit rows; atoms named a, b, ...
bool_trace bits_of(std::vector<std::vector<int>> rows, std::size_t k) {
    bool_trace bt;
    bt.n_rows = rows.size();
    bt.n_atoms = k;
    for (std::size_t j = 0; j < k; ++j) bt.atoms.add(bool_expr::column(std::string(1, char('a' + j))));
    for (const auto& r : rows)
        for (std::size_t j = 0; j < k; ++j) bt.bits.push_back(static_cast<std::uint8_t>(r[j]));
    return bt;
}

sere_ptr q(const std::string& text) { return desugar(parse(text)); }

} // namespace

TEST_CASE("atom matches exactly one satisfying row") {
    auto bt = bits_of({{1}}, 1);
    oracle o(q("a"), bt);
    CHECK(o.matches(0, 0));
    CHECK_FALSE(o.matches(0, -1)); // empty segment
    auto zero = bits_of({{0}}, 1);
    oracle z(q("a"), zero);
    CHECK_FALSE(z.matches(0, 0));
}

TEST_CASE("concatenation splits the segment") {
    auto bt = bits_of({{1, 0}, {0, 1}}, 2);
    oracle o(q("a ; b"), bt);
    CHECK(o.matches(0, 1));
    CHECK_FALSE(o.matches(0, 0));
    CHECK_FALSE(o.matches(1, 1));
}

TEST_CASE("star matches the empty segment") {
    auto bt = bits_of({{1}, {0}}, 1);
    oracle o(q("a[*]"), bt);
    CHECK(o.matches(0, -1));
    CHECK(o.matches(1, 0));  // empty at position 1
    CHECK(o.matches(2, 1));  // empty at the end
    CHECK(o.matches(0, 0));
    CHECK_FALSE(o.matches(0, 1)); // row 1 has !a
}

TEST_CASE("intersection requires both operands over the same rows") {
    auto bt = bits_of({{1, 1}, {1, 0}}, 2);
    oracle o(q("a[+] & b[+]"), bt);
    CHECK(o.matches(0, 0));
    CHECK_FALSE(o.matches(0, 1)); // b fails on row 1
    CHECK_FALSE(o.matches(1, 1));

    // length mismatch never matches: a;b vs single-row a
    oracle two(q("(a ; b) & a"), bits_of({{1, 1}, {0, 1}}, 2));
    CHECK_FALSE(two.matches(0, 1));
    CHECK_FALSE(two.matches(0, 0));
}

TEST_CASE("repeat counts are exact") {
    auto bt = bits_of({{1}, {1}, {1}}, 1);
    oracle o(q("a[*2]"), bt);
    CHECK(o.matches(0, 1));
    CHECK(o.matches(1, 2));
    CHECK_FALSE(o.matches(0, 0));
    CHECK_FALSE(o.matches(0, 2));

    oracle zero(q("a[*0]"), bt);
    CHECK(zero.matches(0, -1));
    CHECK_FALSE(zero.matches(0, 0));

    oracle range(q("a[*1..2]"), bt);
    CHECK(range.matches(0, 0));
    CHECK(range.matches(0, 1));
    CHECK_FALSE(range.matches(0, 2));

    oracle least(q("a[*2..]"), bt);
    CHECK_FALSE(least.matches(0, 0));
    CHECK(least.matches(0, 1));
    CHECK(least.matches(0, 2));

    oracle most(q("a[*..2]"), bt);
    CHECK(most.matches(0, -1));
    CHECK(most.matches(0, 1));
    CHECK_FALSE(most.matches(0, 2));
}

TEST_CASE("plus of a nullable body still needs the body once") {
    auto bt = bits_of({{1}}, 1);
    oracle o(q("(a[*0..1])[+]"), bt);
    CHECK(o.matches(0, -1)); // body can be empty
    CHECK(o.matches(0, 0));
}

TEST_CASE("hand-checked matrix for a[+];b") {
    auto bt = bits_of({{1, 0}, {1, 0}, {0, 1}}, 2);
    auto m = oracle_matrix(q("a[+] ; b"), bt);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == std::vector<std::int32_t>{2});
    CHECK(m[1] == std::vector<std::int32_t>{2});
    CHECK(m[2].empty());
}

TEST_CASE("alternation and nesting") {
    auto bt = bits_of({{1, 0}, {0, 0}, {0, 1}}, 2);
    oracle o(q("(a or b)[=2]"), bt); // two hits with arbitrary gaps
    CHECK(o.matches(0, 2));
    CHECK_FALSE(o.matches(1, 2));

    oracle alt(q("a ; b | b"), bt);
    CHECK(alt.matches(2, 2));
    CHECK_FALSE(alt.matches(0, 1));
}
