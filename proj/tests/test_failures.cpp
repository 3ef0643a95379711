#include <doctest.h>

#include <algorithm>

#include "frr/failures.hpp"

using namespace frr;

TEST_CASE("random fraction") {
    const Topology t = build_complete(100);
    CHECK(fail_random_fraction(t, 0.0, 3).failed.empty());
    CHECK(fail_random_fraction(t, 1.0, 3).failed.size() == t.edge_count());

    const auto a = fail_random_fraction(t, 0.1, 42);
    const auto b = fail_random_fraction(t, 0.1, 42);
    CHECK(a.failed.size() == 495);
    CHECK(a.failed == b.failed);
    CHECK(std::is_sorted(a.failed.begin(), a.failed.end()));
    CHECK(std::adjacent_find(a.failed.begin(), a.failed.end()) == a.failed.end());
    for (const Edge& e : a.failed) CHECK(t.adjacent(e.u, e.v));
    CHECK(fail_random_fraction(t, 0.1, 43).failed != a.failed);
    CHECK_THROWS_AS(fail_random_fraction(t, 1.5, 1), Error);
}

TEST_CASE("random count covers both sampling branches") {
    const Topology t = build_clos(8);
    for (std::uint64_t count : {std::uint64_t{10}, t.edge_count() - 10}) {
        const auto s = fail_random_count(t, count, 9);
        CHECK(s.failed.size() == count);
        for (const Edge& e : s.failed) CHECK(t.adjacent(e.u, e.v));
    }
    CHECK_THROWS_AS(fail_random_count(t, t.edge_count() + 1, 9), Error);
}

TEST_CASE("random selection is roughly uniform over edges") {
    const Topology t = build_complete(10);
    std::vector<int> hits(t.edge_count(), 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        for (const Edge& e : fail_random_count(t, 5, seed).failed) ++hits[t.edge_index(e)];
    }
    // 2000 * 5 / 45 = 222 expected per edge.
    for (int h : hits) {
        CHECK(h > 160);
        CHECK(h < 290);
    }
}

TEST_CASE("destination edges") {
    const Topology k5 = build_complete(5);
    CHECK(fail_destination_edges(k5, 2, 0, LowestIds{}).failed.empty());
    const auto one = fail_destination_edges(k5, 2, 1, LowestIds{});
    REQUIRE(one.failed.size() == 1);
    CHECK(one.failed[0] == Edge(0, 2));
    CHECK_THROWS_AS(fail_destination_edges(k5, 2, 5, LowestIds{}), Error);

    const Topology big = build_complete(1024);
    const auto s = fail_destination_edges(big, 17, 512, Seeded{5});
    CHECK(s.failed.size() == 512);
    const auto [at_d, inner] = s.split();
    CHECK(at_d == 512);
    CHECK(inner == 0);
    CHECK_FALSE(s.has_inner_failures());
}

TEST_CASE("interval targeted adversary") {
    const Topology t = build_complete(1024);
    const IntervalPartition part(1024, 8);
    CHECK(fail_interval_targeted(t, 0, 3, part, 0, LowestIds{}).failed.empty());
    const auto s = fail_interval_targeted(t, 0, 3, part, 64, Seeded{11});
    CHECK(s.failed.size() == 64);
    for (const Edge& e : s.failed) {
        REQUIRE(e.touches(0));
        CHECK(part.part_of(e.other(0)) == 3);
    }
    const auto all = fail_interval_targeted(t, 0, 3, part, 128, LowestIds{});
    CHECK(all.failed.size() == 128);
    CHECK_THROWS_AS(fail_interval_targeted(t, 0, 3, part, 129, LowestIds{}), Error);
    CHECK_THROWS_AS(fail_interval_targeted(build_clos(8), 0, 0, part, 1, LowestIds{}), Error);
}

TEST_CASE("budget validation") {
    const Topology t = build_complete(1024);
    FailureScenario empty;
    const auto ok = validate_budget(empty, t, BudgetMode::GlobalAlphaN, 0.5);
    CHECK(ok.ok);
    CHECK(ok.destination_failures == 0);
    CHECK(ok.inner_failures == 0);

    const auto s512 = fail_destination_edges(t, 0, 512, LowestIds{});
    const auto c512 = validate_budget(s512, t, BudgetMode::GlobalAlphaN, 0.5);
    CHECK(c512.ok);
    CHECK(c512.destination_failures == 512);
    CHECK(c512.inner_failures == 0);

    const auto s513 = fail_destination_edges(t, 0, 513, LowestIds{});
    CHECK_FALSE(validate_budget(s513, t, BudgetMode::GlobalAlphaN, 0.5).ok);

    const IntervalPartition part(1024, 8);
    const auto four = fail_interval_targeted(t, 0, 2, part, 4, LowestIds{});
    const auto c4 = validate_budget(four, t, BudgetMode::PerIntervalAlphaI, 1.0 / 32, &part);
    CHECK(c4.ok);
    CHECK(c4.worst_interval_failures == 4);
    const auto five = fail_interval_targeted(t, 0, 2, part, 5, LowestIds{});
    CHECK_FALSE(validate_budget(five, t, BudgetMode::PerIntervalAlphaI, 1.0 / 32, &part).ok);

    FailureScenario inner = four;
    inner.failed.emplace_back(part.begin(2) + 1, part.begin(3) + 1);
    std::sort(inner.failed.begin(), inner.failed.end());
    CHECK_FALSE(validate_budget(inner, t, BudgetMode::PerIntervalAlphaI, 1.0 / 32, &part).ok);

    CHECK_THROWS_AS(validate_budget(empty, t, BudgetMode::PerIntervalAlphaI, 0.5), Error);
    CHECK_THROWS_AS(validate_budget(empty, t, BudgetMode::GlobalAlphaN, 1.5), Error);
}

TEST_CASE("scenario text round trip") {
    const Topology t = build_clos(4);
    const auto s = fail_random_count(t, 6, 2);
    const ParsedScenario parsed = parse_scenario(s.to_text(t));
    CHECK(parsed.topology.node_count() == 20);
    CHECK(parsed.scenario.failed == s.failed);
    CHECK_THROWS_AS(parse_scenario("clos 20 4\n0 1\n"), Error);
    CHECK_THROWS_AS(parse_scenario("complete 5 0\n0 1\n1 0\n"), Error);
    CHECK_THROWS_AS(parse_scenario("bogus"), Error);
}

TEST_CASE("link state") {
    const Topology t = build_complete(6);
    FailureScenario s;
    s.failed.emplace_back(1, 4);
    const LinkState links(t, s);
    CHECK_FALSE(links.up(4, 1));
    CHECK(links.failed(1, 4));
    CHECK(links.up(1, 3));
    CHECK_FALSE(links.up(2, 2));
}
