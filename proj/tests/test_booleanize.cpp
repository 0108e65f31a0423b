#include <doctest.h>

#include <algorithm>
#include <random>

#include "trex/booleanize.hpp"
#include "trex/parse.hpp"

using namespace trex;

namespace {

trace flag_trace(std::vector<double> flags) {
    return trace::from_columns({{"anomaly", column_kind::boolean, std::move(flags)}});
}

trace numeric_trace(const char* name, std::vector<double> vals) {
    return trace::from_columns({{name, column_kind::numeric, std::move(vals)}});
}

} // namespace

TEST_CASE("eval_expr: comparison on one row") {
    auto t = numeric_trace("temp_high", {81, 70});
    auto e = parse_expression("temp_high >= 80");
    auto v = eval_expr(e, t, 0);
    CHECK(v.is_bool);
    CHECK(v.truth);
    CHECK_FALSE(eval_expr(e, t, 1).truth);
}

TEST_CASE("eval_expr: out-of-range offset forces the comparison false") {
    auto t = numeric_trace("c", {1, 2, 3});
    auto e = parse_expression("c > c[-1]");
    CHECK_FALSE(eval_expr(e, t, 0).truth); // c[-1] leaves the trace
    CHECK(eval_expr(e, t, 1).truth);
    CHECK(eval_expr(e, t, 2).truth);
    // ...but only the enclosing comparison: the other disjunct still counts
    auto disj = parse_expression("c > c[-1] or c >= 1");
    CHECK(eval_expr(disj, t, 0).truth);
}

TEST_CASE("eval_expr: window sum over a flag column") {
    auto t = flag_trace({0, 1, 1, 0, 0});
    auto e = parse_expression("anomaly[-2] + anomaly[-1] + anomaly + anomaly[1] + anomaly[2] >= 2");
    // rows touching the edges see an out-of-range cell, hence false
    CHECK_FALSE(eval_expr(e, t, 0).truth);
    CHECK_FALSE(eval_expr(e, t, 1).truth);
    CHECK(eval_expr(e, t, 2).truth); // 0+1+1+0+0 = 2
    CHECK_FALSE(eval_expr(e, t, 3).truth);
    CHECK_FALSE(eval_expr(e, t, 4).truth);
}

TEST_CASE("eval_expr: division by zero evaluates false and is flagged") {
    auto t = numeric_trace("x", {4, 0});
    auto e = parse_expression("10 / x > 1");
    auto ok = eval_expr(e, t, 0);
    CHECK(ok.truth);
    CHECK_FALSE(ok.division_by_zero);
    auto bad = eval_expr(e, t, 1);
    CHECK_FALSE(bad.truth);
    CHECK(bad.division_by_zero);
}

TEST_CASE("eval_expr: unknown column fails before evaluation") {
    auto t = numeric_trace("x", {1});
    CHECK_THROWS_AS(eval_expr(parse_expression("y > 0"), t, 0), error);
}

TEST_CASE("numeric column cannot stand as a boolean atom") {
    auto t = numeric_trace("x", {1});
    CHECK_THROWS_AS(eval_expr(parse_expression("x or x"), t, 0), error);
    auto atoms = extract_atoms(desugar(parse("x")));
    CHECK_THROWS_AS(booleanize(t, atoms), error);
}

TEST_CASE("booleanize keeps row count and fills atom columns") {
    auto t = trace::from_columns({
        {"temp_high", column_kind::numeric, {62, 68, 83, 81}},
        {"temp_low", column_kind::numeric, {35, 42, 51, 49}},
    });
    auto atoms = extract_atoms(desugar(parse("temp_high >= 80; temp_low <= 40")));
    auto bt = booleanize(t, atoms);
    REQUIRE(bt.n_rows == 4);
    REQUIRE(bt.n_atoms == 2);
    CHECK(bt.bit(0, 0) == false);
    CHECK(bt.bit(0, 1) == true);
    CHECK(bt.bit(1, 0) == false);
    CHECK(bt.bit(1, 1) == false);
    CHECK(bt.bit(2, 0) == true);
    CHECK(bt.bit(3, 0) == true);
}

TEST_CASE("booleanize of an empty trace") {
    auto t = load_csv("a\n");
    csv_options opts;
    auto atoms = extract_atoms(desugar(parse("a > 0")));
    auto bt = booleanize(t, atoms);
    CHECK(bt.n_rows == 0);
    CHECK(encode(bt).text.empty());
}

TEST_CASE("constant true atom fills an all-ones column") {
    auto t = numeric_trace("x", {1, 2, 3});
    auto atoms = extract_atoms(desugar(parse("[*3]")));
    auto bt = booleanize(t, atoms);
    REQUIRE(bt.n_atoms == 1);
    for (std::size_t r = 0; r < 3; ++r) CHECK(bt.bit(r, 0));
}

TEST_CASE("division by zero surfaces one diagnostic per atom") {
    auto t = numeric_trace("x", {0, 0, 1});
    auto atoms = extract_atoms(desugar(parse("1 / x > 0")));
    auto bt = booleanize(t, atoms);
    CHECK(bt.bit(0, 0) == false);
    CHECK(bt.bit(1, 0) == false);
    CHECK(bt.bit(2, 0) == true);
    REQUIRE(bt.diagnostics.size() == 1);
    CHECK(bt.diagnostics[0].find("division by zero") != std::string::npos);
    CHECK(bt.diagnostics[0].find("row 0") != std::string::npos);
    CHECK(bt.diagnostics[0].find("1 more") != std::string::npos);
}

TEST_CASE("encode renders row tokens") {
    bool_trace bt;
    bt.n_rows = 2;
    bt.n_atoms = 2;
    bt.bits = {0, 1, 0, 0};
    CHECK(encode(bt).text == "(0,1)(0,0)");

    bool_trace empty;
    empty.n_atoms = 3;
    CHECK(encode(empty).text == "");

    bool_trace one;
    one.n_rows = 1;
    one.n_atoms = 1;
    one.bits = {1};
    CHECK(encode(one).text == "(1)");
}

TEST_CASE("decode_offset maps byte offsets to rows") {
    encoded_trace et2;
    et2.n_atoms = 2;
    et2.n_rows = 11;
    et2.text.assign(11 * 5, 'x');
    CHECK(decode_offset(et2, 0) == 0);
    CHECK(decode_offset(et2, 50) == 10);

    encoded_trace et1;
    et1.n_atoms = 1;
    et1.n_rows = 4;
    et1.text.assign(12, 'x');
    CHECK(decode_offset(et1, 9) == 3);

    CHECK_THROWS_AS(decode_offset(et2, 3), error); // misaligned: engine bug
}

TEST_CASE("encoded length is always n_rows * (2k + 1)") {
    std::mt19937 rng(5);
    for (int it = 0; it < 50; ++it) {
        bool_trace bt;
        bt.n_rows = rng() % 12;
        bt.n_atoms = 1 + rng() % 4;
        bt.bits.resize(bt.n_rows * bt.n_atoms);
        for (auto& b : bt.bits) b = rng() % 2;
        auto et = encode(bt);
        CHECK(et.text.size() == bt.n_rows * (2 * bt.n_atoms + 1));
        for (std::size_t r = 0; r < bt.n_rows; ++r)
            CHECK(decode_offset(et, r * et.token_width()) == r);
    }
}

TEST_CASE("booleanization is pointwise: permuting rows permutes bits") {
    std::mt19937 rng(17);
    for (int it = 0; it < 30; ++it) {
        std::size_t n = 1 + rng() % 8;
        std::vector<double> vals;
        for (std::size_t i = 0; i < n; ++i) vals.push_back(static_cast<double>(rng() % 5));
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);

        std::vector<double> shuffled(n);
        for (std::size_t i = 0; i < n; ++i) shuffled[i] = vals[perm[i]];

        // offset-free atom, so rows are independent
        auto atoms = extract_atoms(desugar(parse("x >= 2")));
        auto bt = booleanize(numeric_trace("x", vals), atoms);
        auto bs = booleanize(numeric_trace("x", shuffled), atoms);
        for (std::size_t i = 0; i < n; ++i) CHECK(bs.bit(i, 0) == bt.bit(perm[i], 0));
    }
}
