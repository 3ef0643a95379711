#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frr/failures.hpp"
#include "frr/protocol.hpp"

namespace frr {

enum class FlowStatus { Delivered, HopLimit, Stranded, IntervalDisconnected };

const char* to_string(FlowStatus status);

struct FlowTrace {
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    /// Visited nodes, starting at src.
    std::vector<NodeId> path;
    /// Header hop value on arrival at each path node.
    std::vector<std::uint32_t> header;
    FlowStatus status = FlowStatus::Delivered;
    double weight = 1.0;

    [[nodiscard]] std::uint32_t hops() const { return static_cast<std::uint32_t>(path.size()) - 1; }
    /// True if some node appears twice on the path.
    [[nodiscard]] bool revisits() const;
};

/// Routes one flow. hop_limit 0 selects the protocol default. Throws
/// std::logic_error if the protocol ever forwards over a failed or missing edge.
FlowTrace route_flow(const Router& router, const LinkState& links, NodeId src, std::uint32_t hop_limit);
FlowTrace route_flow(const Protocol& protocol, const FailureScenario& scenario, NodeId src, NodeId dst,
                     std::uint32_t hop_limit = 0);

/// Loads are accumulated in fixed point (weights rounded to multiples of
/// 2^-24) so sums are exact and independent of evaluation order.
inline constexpr double kLoadScale = 16777216.0;

struct LoadReport {
    std::vector<std::int64_t> node_load;
    /// (edge, load) pairs sorted by edge.
    std::vector<std::pair<Edge, std::int64_t>> edge_load;

    double max_edge_load = 0.0;
    double max_node_load = 0.0;
    NodeId max_node = kNoNode;
    double hop_mean = 0.0;
    std::uint32_t hop_max = 0;
    std::uint64_t flows = 0;
    std::uint64_t delivered = 0;
    std::uint64_t undelivered = 0;
    std::uint64_t hop_limited = 0;
    std::uint64_t stranded = 0;
    std::uint64_t interval_disconnected = 0;
    std::uint64_t loop_events = 0;
    /// Σ edge_load and Σ weight·hops in fixed point; equal by construction.
    std::int64_t total_edge_load = 0;
    std::int64_t total_weight_hops = 0;

    [[nodiscard]] double node(NodeId v) const { return static_cast<double>(node_load[v]) / kLoadScale; }
    [[nodiscard]] double edge(Edge e) const;
};

struct EngineOptions {
    /// 0: protocol default.
    std::uint32_t hop_limit = 0;
    /// Count a flow's source towards its node load.
    bool count_source = true;
    unsigned threads = 1;
    bool keep_traces = false;
    /// Check the Shared-Permutations global-phase invariant when the scenario has no inner failures.
    bool check_collisions = true;
};

struct RunResult {
    LoadReport report;
    std::vector<FlowTrace> traces;
    /// (node, hop < E2) pairs hosting more than one flow; -1 if not checked.
    std::int64_t collisions = -1;
};

/// Node weights of a gravity model, D(s, t) = w_s * w_t.
struct DemandMatrix {
    std::vector<NodeId> nodes;
    std::vector<double> weights;

    [[nodiscard]] double demand(std::size_t i, std::size_t j) const { return i == j ? 0.0 : weights[i] * weights[j]; }
};

/// w_v i.i.d. unit-mean exponential from `seed`; unit_weights forces w_v = 1.
DemandMatrix gravity_demands(const std::vector<NodeId>& nodes, std::uint64_t seed, bool unit_weights = false);

/// Every endpoint except d sends one unit flow to d.
RunResult all_to_one(const Protocol& protocol, const FailureScenario& scenario, NodeId d,
                     const EngineOptions& options = {});

/// One flow per ordered pair of demand nodes with weight D(s, t).
RunResult all_to_all(const Protocol& protocol, const FailureScenario& scenario, const DemandMatrix& demands,
                     const EngineOptions& options = {});

struct FlowSpec {
    NodeId src;
    NodeId dst;
    double weight;
};

/// General form: routes the given flows (any destinations) and aggregates.
RunResult run_flows(const Protocol& protocol, const FailureScenario& scenario, const std::vector<FlowSpec>& flows,
                    const EngineOptions& options = {});

/// Number of (node, hop) pairs with hop < limit hosting more than one flow; d excluded.
std::int64_t count_collisions(const std::vector<FlowTrace>& traces, std::uint32_t hop_limit_exclusive);

}  // namespace frr
