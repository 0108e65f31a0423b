#include <doctest.h>

#include <algorithm>
#include <random>

#include "testutil.hpp"

using namespace trex;
using testutil::ab_trace;

namespace {

std::vector<match_span> spans(std::vector<std::pair<std::int64_t, std::int64_t>> ps) {
    std::vector<match_span> out;
    for (auto [s, e] : ps) out.push_back({s, e, false});
    return out;
}

bool_trace booleanize_query(const trace& t, const std::string& q, sere_ptr* core_out = nullptr) {
    auto core = desugar(parse(q));
    auto atoms = extract_atoms(core);
    if (core_out) *core_out = core;
    return booleanize(t, atoms);
}

} // namespace

TEST_CASE("automaton matrix for a[+];b") {
    auto t = ab_trace({1, 1, 0}, {0, 0, 1});
    sere_ptr core;
    auto bt = booleanize_query(t, "a[+] ; b", &core);
    auto m = automaton_matches(core, bt);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == std::vector<std::int32_t>{2});
    CHECK(m[1] == std::vector<std::int32_t>{2});
    CHECK(m[2].empty());
}

TEST_CASE("any query over an empty trace yields nothing") {
    auto t = ab_trace({}, {});
    for (const char* q : {"a", "a[*]", "a & b", "[*3]"}) {
        auto r = find_matches(t, q, {});
        CHECK(r.spans.empty());
    }
}

TEST_CASE("weather-style trace has exactly one hot-then-cold match") {
    // booleanization bits taken from the checked-in weather table
    std::vector<int> hot = {0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0,
                            0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0};
    std::vector<int> cold = {1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0,
                             1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
    auto t = ab_trace(hot, cold);
    sere_ptr core;
    auto bt = booleanize_query(t, "a ; b", &core);
    auto m = automaton_matches(core, bt);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == 10) CHECK(m[i] == std::vector<std::int32_t>{11});
        else CHECK(m[i].empty());
    }
}

TEST_CASE("regex backend: disjoint search over the encoded text") {
    auto t = ab_trace({1, 1, 0}, {0, 0, 1});
    sere_ptr core;
    auto bt = booleanize_query(t, "a[+] ; b", &core);
    auto pattern = compile_pattern(core, bt.atoms);
    auto span_list = regex_matches(pattern, encode(bt), match_mode::disjoint);
    CHECK(span_list == spans({{0, 2}})); // leftmost search swallows both a rows
}

TEST_CASE("regex backend: every row matches the constant-true atom") {
    auto t = ab_trace({0, 1, 0}, {0, 0, 0});
    sere_ptr core = desugar(parse("true"));
    auto atoms = extract_atoms(core);
    auto bt = booleanize(t, atoms);
    auto pattern = compile_pattern(core, atoms);
    auto got = regex_matches(pattern, encode(bt), match_mode::disjoint);
    CHECK(got == spans({{0, 0}, {1, 1}, {2, 2}}));
}

TEST_CASE("regex backend refuses intersection queries") {
    auto t = ab_trace({1}, {1});
    sere_ptr core;
    auto bt = booleanize_query(t, "a & b", &core);
    auto pattern = compile_pattern(core, bt.atoms);
    CHECK(pattern.features.lookahead);
    CHECK_FALSE(regex_supported(pattern));
    CHECK_THROWS_AS(regex_matches(pattern, encode(bt), match_mode::disjoint), error);

    engine_config cfg;
    cfg.backend = backend_kind::regex;
    CHECK_THROWS_AS(find_matches(t, "a & b", cfg), error);
}

TEST_CASE("find_matches modes on five consecutive increases") {
    // strictly increasing, so the only false atom row is row 0 (offset
    // leaves the trace there)
    std::vector<double> rising = {1, 2, 3, 4, 5, 6, 7};
    auto t = trace::from_columns({{"c", column_kind::numeric, rising}});

    engine_config scan;
    scan.mode = match_mode::scan;
    auto s = find_matches(t, "(c>c[-1])[*5]", scan);
    CHECK(s.spans == spans({{1, 5}, {2, 6}}));

    auto d = find_matches(t, "(c>c[-1])[*5]", {});
    CHECK(d.spans == spans({{1, 5}}));
}

TEST_CASE("all mode on a flat series reports every segment") {
    std::vector<double> flat(5, 42.0);
    auto t = trace::from_columns({{"price", column_kind::numeric, flat}});
    engine_config cfg;
    cfg.mode = match_mode::all;
    std::map<std::string, std::string> defs{{"steady", "40 <= price and price <= 45"}};
    auto r = find_matches(t, "$steady[+]", cfg, defs);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < 5; ++i) expected += 5 - i;
    CHECK(r.spans.size() == expected);
}

TEST_CASE("include_empty reports (i, i-1) sentinels for nullable queries") {
    auto t = ab_trace({0, 1}, {0, 0});
    engine_config cfg;
    cfg.include_empty = true;
    auto r = find_matches(t, "a[*]", cfg);
    REQUIRE(r.spans.size() == 3); // empty at 0, empty at 1, plus (1,1)
    CHECK(r.spans[0] == match_span{0, -1, true});
    CHECK(r.spans[1] == match_span{1, 0, true});
    CHECK(r.spans[2] == match_span{1, 1, false});

    auto without = find_matches(t, "a[*]", {});
    CHECK(without.spans == spans({{1, 1}}));

    // non-nullable queries report no sentinels
    auto none = find_matches(t, "a", cfg);
    CHECK(none.spans == spans({{1, 1}}));
}

TEST_CASE("pipeline errors carry their stage") {
    auto t = ab_trace({1}, {0});
    try {
        find_matches(t, "a ;;", {});
        FAIL("expected parse error");
    } catch (const error& e) {
        CHECK(e.stage() == "parse");
    }
    try {
        find_matches(t, "zz > 1", {});
        FAIL("expected booleanize error");
    } catch (const error& e) {
        CHECK(e.stage() == "booleanize");
    }
    try {
        find_matches(t, "$boom", {});
        FAIL("expected define error");
    } catch (const error& e) {
        CHECK(e.stage() == "define");
    }
}

TEST_CASE("division by zero surfaces as a diagnostic, not a failure") {
    auto t = trace::from_columns({{"x", column_kind::numeric, {0, 2}}});
    auto r = find_matches(t, "4 / x >= 2", {});
    CHECK(r.spans == spans({{1, 1}}));
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].find("division by zero") != std::string::npos);
}

TEST_CASE("backend auto uses the automaton on small inputs and for &") {
    auto t = ab_trace({1, 0}, {1, 0});
    engine_config cfg;
    cfg.backend = backend_kind::autoselect;
    CHECK(find_matches(t, "a ; b", cfg).backend_used == "nfa");
    CHECK(find_matches(t, "a & b", cfg).backend_used == "nfa");
}

// ---- differential properties ----------------------------------------------

TEST_CASE("automaton all-mode equals the brute-force relation (with &)") {
    std::mt19937 rng(2025);
    for (int it = 0; it < 300; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3));
        CAPTURE(q);
        CAPTURE(t.n_rows());
        sere_ptr core = desugar(parse(q));
        auto atoms = extract_atoms(core);
        auto bt = booleanize(t, atoms);
        CHECK(automaton_matches(core, bt) == oracle_matrix(core, bt));
    }
}

TEST_CASE("regex disjoint spans are always true matches") {
    std::mt19937 rng(77);
    testutil::query_options opts;
    opts.allow_conj = false;
    for (int it = 0; it < 300; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3), opts);
        CAPTURE(q);
        sere_ptr core = desugar(parse(q));
        auto atoms = extract_atoms(core);
        auto bt = booleanize(t, atoms);
        auto pattern = compile_pattern(core, atoms);
        oracle ref(core, bt);
        for (const auto& s : regex_matches(pattern, encode(bt), match_mode::disjoint)) {
            CAPTURE(s.start);
            CAPTURE(s.end);
            CHECK(ref.matches(s.start, s.end));
        }
    }
}

TEST_CASE("anchored segment matching by the host engine equals the oracle") {
    std::mt19937 rng(31337);
    testutil::query_options opts;
    opts.allow_conj = false;
    for (int it = 0; it < 200; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3), opts);
        CAPTURE(q);
        sere_ptr core = desugar(parse(q));
        auto atoms = extract_atoms(core);
        auto bt = booleanize(t, atoms);
        auto all = regex_matches(compile_pattern(core, atoms), encode(bt), match_mode::all);
        CHECK(testutil::spans_of(oracle_matrix(core, bt)) == all);
    }
}

TEST_CASE("backends agree exactly on fixed repetitions without alternation") {
    std::mt19937 rng(9001);
    testutil::query_options opts;
    opts.allow_conj = false;
    opts.allow_alt = false;
    opts.fixed_repeats_only = true;
    for (int it = 0; it < 300; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3), opts);
        CAPTURE(q);
        sere_ptr core = desugar(parse(q));
        auto atoms = extract_atoms(core);
        auto bt = booleanize(t, atoms);
        matcher m(build_nfa(core, atoms));
        auto nfa_spans = m.disjoint(bt);
        auto re_spans = regex_matches(compile_pattern(core, atoms), encode(bt), match_mode::disjoint);
        CHECK(nfa_spans == re_spans);
    }
}

TEST_CASE("modes nest: disjoint within scan within all") {
    std::mt19937 rng(4096);
    for (int it = 0; it < 200; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3));
        CAPTURE(q);
        engine_config all_cfg, scan_cfg, dis_cfg;
        all_cfg.mode = match_mode::all;
        scan_cfg.mode = match_mode::scan;
        dis_cfg.mode = match_mode::disjoint;
        auto all = find_matches(t, q, all_cfg).spans;
        auto scan = find_matches(t, q, scan_cfg).spans;
        auto dis = find_matches(t, q, dis_cfg).spans;
        auto subset = [](const std::vector<match_span>& xs, const std::vector<match_span>& ys) {
            for (const auto& x : xs)
                if (std::find(ys.begin(), ys.end(), x) == ys.end()) return false;
            return true;
        };
        CHECK(subset(dis, scan));
        CHECK(subset(scan, all));
    }
}

TEST_CASE("disjoint single pass equals greedy selection over the full relation") {
    std::mt19937 rng(60601);
    for (int it = 0; it < 200; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3));
        CAPTURE(q);
        sere_ptr core = desugar(parse(q));
        auto atoms = extract_atoms(core);
        auto bt = booleanize(t, atoms);
        matcher m(build_nfa(core, atoms));
        auto fast = m.disjoint(bt);

        // reference: greedy leftmost-longest over the membership matrix
        auto matrix = m.all_matches(bt);
        std::vector<match_span> ref;
        std::int64_t pos = 0;
        for (std::size_t i = 0; i < matrix.size(); ++i) {
            if (static_cast<std::int64_t>(i) < pos || matrix[i].empty()) continue;
            ref.push_back({static_cast<std::int64_t>(i), matrix[i].back(), false});
            pos = matrix[i].back() + 1;
        }
        CHECK(fast == ref);
    }
}

TEST_CASE("scan mode is the leftmost-longest row of the relation") {
    std::mt19937 rng(515151);
    for (int it = 0; it < 100; ++it) {
        auto t = testutil::random_ab_trace(rng);
        auto q = testutil::random_query(rng, 1 + static_cast<int>(rng() % 3));
        CAPTURE(q);
        sere_ptr core = desugar(parse(q));
        auto atoms = extract_atoms(core);
        auto bt = booleanize(t, atoms);
        matcher m(build_nfa(core, atoms));
        auto scan = m.scan(bt);
        auto matrix = m.all_matches(bt);
        std::vector<match_span> ref;
        for (std::size_t i = 0; i < matrix.size(); ++i)
            if (!matrix[i].empty())
                ref.push_back({static_cast<std::int64_t>(i), matrix[i].back(), false});
        CHECK(scan == ref);
    }
}
