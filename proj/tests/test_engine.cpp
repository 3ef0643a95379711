#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "frr/complete_protocols.hpp"
#include "frr/engine.hpp"

using namespace frr;

namespace {

class Reckless final : public Router {
public:
    explicit Reckless(NodeId d) : Router(d) {}
    Step forward(NodeId, PacketState& state, const LinkState&) const override {
        ++state.hop;
        return Step::to(destination());
    }
};

ProtocolOptions seeded(std::uint64_t seed) {
    ProtocolOptions o;
    o.seed = seed;
    o.global_seed = seed + 1000;
    return o;
}

bool same(const LoadReport& a, const LoadReport& b) {
    return a.node_load == b.node_load && a.edge_load == b.edge_load && a.hop_mean == b.hop_mean &&
           a.hop_max == b.hop_max && a.undelivered == b.undelivered && a.loop_events == b.loop_events;
}

}  // namespace

TEST_CASE("failure free complete graph") {
    const Topology t = build_complete(64);
    for (ProtocolId id : {ProtocolId::ThreeP, ProtocolId::Intervals, ProtocolId::SharedPerm, ProtocolId::ADet,
                          ProtocolId::APrnb, ProtocolId::Square1}) {
        const auto p = make_protocol(id, t, seeded(1));
        const FlowTrace trace = route_flow(*p, {}, 4, 9);
        CHECK(trace.path == std::vector<NodeId>{4, 9});
        const RunResult run = all_to_one(*p, {}, 9);
        CHECK(run.report.max_edge_load == 1.0);
        CHECK(run.report.hop_mean == 1.0);
        CHECK(run.report.edge_load.size() == 63);
        for (const auto& [e, load] : run.report.edge_load) CHECK(e.touches(9));
        CHECK(run.report.edge(Edge(3, 4)) == 0.0);
        CHECK(run.report.node(9) == 0.0);
        CHECK(run.report.max_node_load == 1.0);
    }
}

TEST_CASE("failure free clos hop mean") {
    for (std::uint32_t k : {8u, 16u}) {
        const Topology t = build_clos(k);
        const double h = k / 2.0;
        const double same_pod = h - 1;
        const double other = h * (k - 1);
        const double expected = (2 * same_pod + 4 * other) / (same_pod + other);
        for (ProtocolId id : {ProtocolId::ThreePID, ProtocolId::ADet, ProtocolId::Square1}) {
            const auto p = make_protocol(id, t, seeded(2));
            const RunResult run = all_to_one(*p, {}, t.bottom_node(1, 1));
            CHECK(run.report.hop_mean == doctest::Approx(expected));
            CHECK(run.report.hop_max == 4);
            CHECK(run.report.undelivered == 0);
        }
    }
}

TEST_CASE("forwarding over a failed edge is a logic error") {
    const Topology t = build_complete(6);
    FailureScenario s;
    s.failed.emplace_back(1, 5);
    const LinkState links(t, s);
    const Reckless router(5);
    CHECK_THROWS_AS(route_flow(router, links, 1, 10), std::logic_error);
    CHECK(route_flow(router, links, 2, 10).status == FlowStatus::Delivered);
}

TEST_CASE("gravity demands") {
    const std::vector<NodeId> nodes{0, 1, 2, 3, 4};
    const DemandMatrix unit = gravity_demands(nodes, 3, true);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) CHECK(unit.demand(i, j) == (i == j ? 0.0 : 1.0));
    }

    std::vector<NodeId> many(320);
    for (NodeId v = 0; v < 320; ++v) many[v] = v;
    double grand = 0.0;
    constexpr int seeds = 50;
    for (int seed = 0; seed < seeds; ++seed) {
        const DemandMatrix m = gravity_demands(many, static_cast<std::uint64_t>(seed));
        double sum = 0.0;
        for (std::size_t i = 0; i < 320; ++i) {
            CHECK(m.weights[i] >= 0.0);
            for (std::size_t j = 0; j < 320; ++j) sum += m.demand(i, j);
        }
        const double mean = sum / (320.0 * 319.0);
        CHECK(mean > 0.6);
        CHECK(mean < 1.6);
        grand += mean;
    }
    CHECK(grand / seeds == doctest::Approx(1.0).epsilon(0.1));
    CHECK(gravity_demands(many, 4).weights == gravity_demands(many, 4).weights);
}

TEST_CASE("all to all loads") {
    const Topology t = build_complete(4);
    const auto p = make_protocol(ProtocolId::ThreeP, t, seeded(1));
    const DemandMatrix unit = gravity_demands({0, 1, 2, 3}, 1, true);
    const RunResult run = all_to_all(*p, {}, unit);
    CHECK(run.report.flows == 12);
    for (NodeId v = 0; v < 4; ++v) CHECK(run.report.node(v) == 3.0);
    CHECK(run.report.max_edge_load == 2.0);

    DemandMatrix zero = unit;
    std::fill(zero.weights.begin(), zero.weights.end(), 0.0);
    const RunResult none = all_to_all(*p, {}, zero);
    CHECK(none.report.max_node_load == 0.0);
    CHECK(none.report.max_edge_load == 0.0);
}

TEST_CASE("weighted flow loads every edge of its path") {
    const Topology t = build_clos(8);
    const auto p = make_protocol(ProtocolId::Square1, t, seeded(1));
    const NodeId s = t.bottom_node(0, 0);
    const NodeId d = t.bottom_node(4, 0);
    EngineOptions opts;
    opts.keep_traces = true;
    const RunResult run = run_flows(*p, {}, {{s, d, 2.5}}, opts);
    const auto& path = run.traces.at(0).path;
    REQUIRE(path.size() == 5);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) CHECK(run.report.edge(Edge(path[i], path[i + 1])) == 2.5);
    CHECK(run.report.total_edge_load == static_cast<std::int64_t>(2.5 * 4 * kLoadScale));
    CHECK(run.report.node(s) == 2.5);

    opts.count_source = false;
    CHECK(run_flows(*p, {}, {{s, d, 2.5}}, opts).report.node(s) == 0.0);
    CHECK_THROWS_AS(run_flows(*p, {}, {{s, s, 1.0}}), Error);
    CHECK_THROWS_AS(run_flows(*p, {}, {{s, d, -1.0}}), Error);
}

TEST_CASE("conservation and determinism under failures") {
    const Topology t = build_clos(8);
    for (ProtocolId id : {ProtocolId::ThreePD, ProtocolId::ThreePID, ProtocolId::IntervalD, ProtocolId::IntervalID,
                          ProtocolId::ADet, ProtocolId::APrnb, ProtocolId::ACasa, ProtocolId::Square1}) {
        const auto p = make_protocol(id, t, seeded(5));
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const FailureScenario s = fail_random_fraction(t, 0.15, seed);
            const NodeId d = t.endpoints()[seed * 7 % 32];
            EngineOptions one;
            one.keep_traces = true;
            EngineOptions many = one;
            many.threads = 8;
            const RunResult a = all_to_one(*p, s, d, one);
            const RunResult b = all_to_one(*p, s, d, many);
            CHECK(same(a.report, b.report));
            CHECK(a.report.total_edge_load == a.report.total_weight_hops);

            // Each delivered flow ends on exactly one edge into d, and nothing else touches d.
            std::int64_t into_d = 0;
            for (const auto& [e, load] : a.report.edge_load) {
                if (e.touches(d)) into_d += load;
            }
            CHECK(into_d == static_cast<std::int64_t>(a.report.delivered) * static_cast<std::int64_t>(kLoadScale));
            std::uint64_t loops = 0;
            for (const FlowTrace& trace : a.traces) {
                loops += trace.revisits();
                for (std::size_t i = 0; i + 1 < trace.path.size(); ++i) {
                    CHECK(trace.header[i + 1] >= trace.header[i]);
                }
            }
            CHECK(loops == a.report.loop_events);
        }
    }
}

TEST_CASE("shared permutations collision invariant") {
    const Topology t = build_complete(256);
    const auto p = make_protocol(ProtocolId::SharedPerm, t, seeded(3));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const FailureScenario s = fail_destination_edges(t, 17, 128, Seeded{seed});
        const RunResult run = all_to_one(*p, s, 17);
        CHECK(run.collisions == 0);
        CHECK(run.report.undelivered == 0);
    }
    FailureScenario inner;
    inner.failed.emplace_back(1, 2);
    CHECK(all_to_one(*p, inner, 17).collisions == -1);
}

TEST_CASE("collision counter") {
    FlowTrace a;
    a.dst = 9;
    a.path = {1, 2, 9};
    a.header = {0, 1, 2};
    FlowTrace b = a;
    b.path = {3, 2, 9};
    CHECK(count_collisions({a, b}, 5) == 1);
    CHECK(count_collisions({a, b}, 1) == 0);
}
