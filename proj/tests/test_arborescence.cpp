#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "frr/arborescence.hpp"
#include "frr/digraph.hpp"
#include "frr/engine.hpp"
#include "frr/structure_cache.hpp"

using namespace frr;

namespace {

// Test-side max flow on unit undirected capacities (each direction usable once).
int edmonds_karp(const Topology& t, NodeId s, NodeId d) {
    const std::uint32_t n = t.node_count();
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (std::uint64_t i = 0; i < t.edge_count(); ++i) {
        const Edge e = t.edge_at(i);
        cap[e.u][e.v] = cap[e.v][e.u] = 1;
    }
    int flow = 0;
    while (true) {
        std::vector<NodeId> prev(n, kNoNode);
        prev[s] = s;
        std::deque<NodeId> queue{s};
        while (!queue.empty() && prev[d] == kNoNode) {
            const NodeId v = queue.front();
            queue.pop_front();
            for (NodeId u = 0; u < n; ++u) {
                if (cap[v][u] > 0 && prev[u] == kNoNode) {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if (prev[d] == kNoNode) return flow;
        for (NodeId v = d; v != s; v = prev[v]) {
            --cap[prev[v]][v];
            ++cap[v][prev[v]];
        }
        ++flow;
    }
}

std::size_t arc_total(const ArborescenceSet& set) {
    std::size_t arcs = 0;
    for (const auto& parent : set.parents) {
        arcs += static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](NodeId p) { return p != kNoNode; }));
    }
    return arcs;
}

}  // namespace

TEST_CASE("clos k=4 packing") {
    const Topology t = build_clos(4);
    const NodeId d = t.bottom_node(1, 0);
    const ArborescenceSet set = compute_arborescences(t, d, 2, 0);
    CHECK(set.count() == 2);
    for (const auto& parent : set.parents) {
        CHECK(std::count_if(parent.begin(), parent.end(), [](NodeId p) { return p != kNoNode; }) == 19);
    }
    CHECK(verify_arborescences(t, set).ok);
}

TEST_CASE("clos k=8 connectivity oracle and packing") {
    const Topology t = build_clos(8);
    const NodeId d = t.bottom_node(2, 1);
    for (NodeId s : {t.bottom_node(0, 0), t.bottom_node(2, 3), t.bottom_node(7, 2)}) {
        CHECK(edmonds_karp(t, s, d) == 4);
        const Digraph g(t);
        CHECK(unit_max_flow(g, s, d, 100, std::vector<char>(g.arc_count(), 1)) == 4);
    }
    for (NodeId root : t.endpoints()) {
        PackingStats stats;
        const ArborescenceSet set = compute_arborescences(t, root, 4, 7, &stats);
        REQUIRE(verify_arborescences(t, set).ok);
        CHECK(arc_total(set) == 4 * (t.node_count() - 1));
    }
    const ArborescenceSet exact = compute_arborescences_exact(t, d, 4, 3);
    CHECK(verify_arborescences(t, exact).ok);
}

TEST_CASE("packing rejects infeasible counts") {
    const Topology t = build_clos(8);
    try {
        compute_arborescences(t, t.bottom_node(0, 0), 5, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientConnectivity);
    }
    CHECK_THROWS_AS(compute_arborescences(t, 0, 0, 1), Error);
}

TEST_CASE("complete graph closed form") {
    for (std::uint32_t n : {4u, 7u, 12u}) {
        const Topology t = build_complete(n);
        for (NodeId d = 0; d < n; ++d) {
            const auto set = complete_graph_arborescences(n, d);
            CHECK(set.count() == n - 1);
            CHECK(verify_arborescences(t, set).ok);
        }
    }
    CHECK(arborescence_count(build_complete(9)) == 8);
    CHECK(arborescence_count(build_clos(16)) == 8);
}

TEST_CASE("verifier catches broken sets") {
    const Topology t = build_complete(5);
    ArborescenceSet good = complete_graph_arborescences(5, 0);
    REQUIRE(verify_arborescences(t, good).ok);

    ArborescenceSet shared = good;
    shared.parents[1][3] = good.parents[0][3];
    CHECK_FALSE(verify_arborescences(t, shared).ok);

    ArborescenceSet cycle = good;
    cycle.parents[0][1] = 2;
    cycle.parents[0][2] = 1;
    CHECK_FALSE(verify_arborescences(t, cycle).ok);

    ArborescenceSet missing = good;
    missing.parents[2][4] = kNoNode;
    CHECK_FALSE(verify_arborescences(t, missing).ok);

    ArborescenceSet self = good;
    self.parents[0][3] = 3;
    CHECK_FALSE(verify_arborescences(t, self).ok);
}

TEST_CASE("arborescence text round trip") {
    const Topology t = build_clos(4);
    const ArborescenceSet set = compute_arborescences(t, t.bottom_node(3, 1), 2, 5);
    const ArborescenceSet back = parse_arborescences(set.to_text());
    CHECK(back.root == set.root);
    CHECK(back.parents == set.parents);
    CHECK_THROWS_AS(parse_arborescences("0 1 3\n0 1 2\n0 1 2\n"), Error);
    CHECK_THROWS_AS(parse_arborescences("x"), Error);
}

TEST_CASE("prime powers") {
    std::uint32_t p = 0;
    std::uint32_t m = 0;
    CHECK(prime_power(64, &p, &m));
    CHECK(p == 2);
    CHECK(m == 6);
    CHECK(prime_power(9, &p, &m));
    CHECK(p == 3);
    CHECK(m == 2);
    CHECK(prime_power(7));
    CHECK_FALSE(prime_power(63));
    CHECK_FALSE(prime_power(12));
    CHECK_FALSE(prime_power(1));
    CHECK_THROWS_AS(BibdMatrix(6), Error);
}

TEST_CASE("switching matrix rows") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 27u}) {
        const BibdMatrix m(q);
        for (std::uint32_t i = 0; i < q; ++i) {
            auto row = m.row(i);
            REQUIRE(row.size() == q - 1);
            CHECK(std::find(row.begin(), row.end(), i) == row.end());
            std::sort(row.begin(), row.end());
            CHECK(std::adjacent_find(row.begin(), row.end()) == row.end());
            CHECK(row.back() < q);
        }
        for (std::uint32_t a = 0; a < q; ++a) {
            for (std::uint32_t b = a + 1; b < q; ++b) {
                for (std::uint32_t t = 0; t + 1 < q; ++t) CHECK(m.row(a)[t] != m.row(b)[t]);
            }
        }
    }
}

TEST_CASE("next arborescence") {
    std::uint64_t state = 0;
    CHECK(next_arborescence(SwitchMode::Det, 3, 5, state, nullptr, 0) == 4);
    CHECK(next_arborescence(SwitchMode::Det, 4, 5, state, nullptr, 0) == 0);

    std::vector<int> hits(4, 0);
    state = 12345;
    constexpr int draws = 10000;
    for (int i = 0; i < draws; ++i) ++hits[next_arborescence(SwitchMode::Prnb, 2, 4, state, nullptr, 0)];
    CHECK(hits[2] == 0);
    const double mean = draws / 3.0;
    const double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
    for (int j : {0, 1, 3}) CHECK(std::abs(hits[j] - mean) < 3 * sigma);

    const BibdMatrix m(4);
    std::set<std::uint32_t> seen;
    for (std::uint32_t s = 0; s < 3; ++s) seen.insert(next_arborescence(SwitchMode::Casa, 1, 4, state, &m, s));
    CHECK(seen == std::set<std::uint32_t>{0, 2, 3});
    CHECK(next_arborescence(SwitchMode::Casa, 1, 4, state, &m, 3) == m.row(1)[0]);
    CHECK_THROWS_AS(next_arborescence(SwitchMode::Casa, 1, 4, state, nullptr, 0), Error);
}

TEST_CASE("arborescence routing") {
    const Topology t = build_clos(8);
    ProtocolOptions opts;
    opts.packing_seed = 4;
    const ArborescenceProtocol det(t, SwitchMode::Det, opts);
    const NodeId d = t.bottom_node(5, 2);
    const auto set = det.arborescences(d);
    const auto router = det.router(d);
    const auto dist = bfs_distances(t, d);
    const LinkState clean(t, {});

    for (NodeId src : t.endpoints()) {
        if (src == d) continue;
        const PacketState start = router->start(src);
        const FlowTrace trace = route_flow(*router, clean, src, det.default_hop_limit());
        REQUIRE(trace.status == FlowStatus::Delivered);
        std::vector<NodeId> expected{src};
        while (expected.back() != d) expected.push_back(set->parents[start.tree][expected.back()]);
        CHECK(trace.path == expected);
        CHECK(trace.hops() == dist[src]);
    }

    // One failed arc on the current tree: Det continues on the next tree from v.
    const NodeId src = t.bottom_node(0, 0);
    const PacketState start = router->start(src);
    const NodeId parent = set->parents[start.tree][src];
    FailureScenario s;
    s.failed.emplace_back(src, parent);
    const LinkState one(t, s);
    PacketState state = start;
    const Step step = router->forward(src, state, one);
    const std::uint32_t next_tree = (start.tree + 1) % 4;
    if (one.up(src, set->parents[next_tree][src])) {
        CHECK(state.tree == next_tree);
        CHECK(step.next == set->parents[next_tree][src]);
    }
    CHECK(state.switches >= 1);

    FailureScenario isolated;
    for (NodeId u : t.neighbors(src)) isolated.failed.emplace_back(src, u);
    std::sort(isolated.failed.begin(), isolated.failed.end());
    const FlowTrace stuck = route_flow(det, isolated, src, d);
    CHECK(stuck.status == FlowStatus::Stranded);
}

TEST_CASE("structure cache shares builds") {
    auto cache = std::make_shared<StructureCache>();
    const Topology t = build_clos(8);
    const auto a = cache->arborescences(t, t.bottom_node(0, 0), 4, 1);
    const auto b = cache->arborescences(t, t.bottom_node(0, 0), 4, 1);
    CHECK(a.get() == b.get());
    const auto c = cache->arborescences(t, t.bottom_node(0, 0), 4, 2);
    CHECK(c.get() != a.get());
    CHECK(cache->size() == 2);
}
