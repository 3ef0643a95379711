#include <doctest.h>

#include <algorithm>
#include <set>

#include "frr/partition.hpp"
#include "frr/rng.hpp"
#include "frr/topology.hpp"

using namespace frr;

TEST_CASE("complete graph sizes") {
    const Topology k5 = build_complete(5);
    CHECK(k5.edge_count() == 10);
    for (NodeId v = 0; v < 5; ++v) CHECK(k5.degree(v) == 4);
    CHECK(build_complete(2).edge_count() == 1);
    CHECK(build_complete(1024).edge_count() == 523776);
    CHECK_THROWS_AS(build_complete(1), Error);
}

TEST_CASE("complete graph edge index round trip") {
    const Topology t = build_complete(37);
    std::set<Edge> seen;
    for (std::uint64_t i = 0; i < t.edge_count(); ++i) {
        const Edge e = t.edge_at(i);
        CHECK(e.u < e.v);
        CHECK(t.adjacent(e.u, e.v));
        CHECK(t.edge_index(e) == i);
        seen.insert(e);
    }
    CHECK(seen.size() == t.edge_count());
    CHECK_FALSE(t.adjacent(3, 3));
}

TEST_CASE("clos sizes and degrees") {
    const Topology c4 = build_clos(4);
    CHECK(c4.node_count() == 20);
    const Topology c80 = build_clos(80);
    CHECK(c80.node_count() == 8000);
    CHECK_THROWS_AS(build_clos(5), Error);
    CHECK_THROWS_AS(build_clos(2), Error);

    for (std::uint32_t k : {4u, 8u, 16u}) {
        const Topology t = build_clos(k);
        const std::uint32_t h = k / 2;
        CHECK(t.edge_count() == static_cast<std::uint64_t>(k) * h * h * 2);
        std::uint64_t degree_sum = 0;
        for (const NodeInfo& info : t.nodes()) {
            const std::uint32_t deg = t.degree(info.id);
            degree_sum += deg;
            switch (info.role) {
                case NodeRole::Block: CHECK(deg == k); break;
                case NodeRole::Top: CHECK(deg == k); break;
                case NodeRole::Bottom: CHECK(deg == h); break;
                case NodeRole::Plain: FAIL("plain node in a Clos"); break;
            }
        }
        CHECK(degree_sum == 2 * t.edge_count());
        CHECK(t.endpoints().size() == static_cast<std::size_t>(k) * h);
    }
}

TEST_CASE("clos adjacency follows the block and pod rules") {
    const Topology t = build_clos(8);
    for (std::uint32_t pod = 0; pod < 8; ++pod) {
        for (std::uint32_t i = 0; i < 4; ++i) {
            const NodeId top = t.top_node(pod, i);
            CHECK(t.info(top).role == NodeRole::Top);
            CHECK(t.info(top).pod == static_cast<int>(pod));
            for (std::uint32_t j = 0; j < 4; ++j) {
                CHECK(t.adjacent(top, t.bottom_node(pod, j)));
                CHECK(t.adjacent(top, t.block_node(i, j)));
                if (j != i) CHECK_FALSE(t.adjacent(top, t.block_node(j, 0)));
            }
            CHECK_FALSE(t.adjacent(top, t.bottom_node((pod + 1) % 8, 0)));
        }
    }
}

TEST_CASE("clos bfs distances") {
    const Topology t = build_clos(4);
    const NodeId s = t.bottom_node(0, 0);
    const auto dist = bfs_distances(t, s);
    CHECK(dist[t.bottom_node(1, 0)] == 4);
    CHECK(dist[t.bottom_node(0, 1)] == 2);
    CHECK(dist[t.top_node(0, 1)] == 1);
    CHECK(dist[t.block_node(1, 1)] == 2);
}

TEST_CASE("topology text header") {
    const Topology t = build_clos(4);
    const std::string text = t.to_text();
    CHECK(text.rfind("clos 20 4\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(t.edge_count()));
    CHECK(build_from_header("complete", 6, 0).edge_count() == 15);
}

TEST_CASE("balanced split") {
    const BalancedSplit s(40, 6);
    std::vector<std::uint32_t> sizes;
    for (std::uint32_t i = 0; i < s.parts(); ++i) sizes.push_back(s.part_size(i));
    CHECK(std::count(sizes.begin(), sizes.end(), 7u) == 4);
    CHECK(std::count(sizes.begin(), sizes.end(), 6u) == 2);
    for (std::uint32_t x = 0; x < 40; ++x) {
        const std::uint32_t p = s.part_of(x);
        CHECK(s.begin(p) <= x);
        CHECK(x < s.end(p));
    }
    CHECK(s.successor(5) == 0);

    const BalancedSplit r(1024, 8);
    for (std::uint32_t i = 0; i < 8; ++i) CHECK(r.part_size(i) == 128);
}

TEST_CASE("derived seeds are stable and position sensitive") {
    CHECK(derive_seed(1, Stream::Cell, {2, 3}) == derive_seed(1, Stream::Cell, {2, 3}));
    CHECK(derive_seed(1, Stream::Cell, {2, 3}) != derive_seed(1, Stream::Cell, {3, 2}));
    CHECK(derive_seed(1, Stream::Cell) != derive_seed(1, Stream::Adversary));
}

TEST_CASE("permutation stream is a prefix of the full permutation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        PermutationStream full(seed, 50);
        const auto all = full.take(50);
        std::vector<std::uint32_t> sorted = all;
        std::sort(sorted.begin(), sorted.end());
        for (std::uint32_t i = 0; i < 50; ++i) CHECK(sorted[i] == i);
        PermutationStream part(seed, 50);
        const auto head = part.take(7);
        CHECK(std::equal(head.begin(), head.end(), all.begin()));
        CHECK(full.exhausted());
    }
}

TEST_CASE("rng below stays in range and covers it") {
    Rng rng(7);
    std::vector<int> hits(5, 0);
    for (int i = 0; i < 5000; ++i) {
        const auto x = rng.below(5);
        REQUIRE(x < 5);
        ++hits[x];
    }
    for (int h : hits) CHECK(h > 850);
}
