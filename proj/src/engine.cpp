#include "frr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "frr/complete_protocols.hpp"
#include "frr/parallel.hpp"
#include "frr/rng.hpp"

namespace frr {

const char* to_string(FlowStatus status) {
    switch (status) {
        case FlowStatus::Delivered: return "delivered";
        case FlowStatus::HopLimit: return "hop-limit";
        case FlowStatus::Stranded: return "stranded";
        case FlowStatus::IntervalDisconnected: return "interval-disconnected";
    }
    return "?";
}

bool FlowTrace::revisits() const {
    std::unordered_set<NodeId> seen;
    seen.reserve(path.size() * 2);
    for (NodeId v : path) {
        if (!seen.insert(v).second) return true;
    }
    return false;
}

double LoadReport::edge(Edge e) const {
    auto it = std::lower_bound(edge_load.begin(), edge_load.end(), e,
                               [](const auto& entry, const Edge& key) { return entry.first < key; });
    return it != edge_load.end() && it->first == e ? static_cast<double>(it->second) / kLoadScale : 0.0;
}

FlowTrace route_flow(const Router& router, const LinkState& links, NodeId src, std::uint32_t hop_limit) {
    FlowTrace trace;
    trace.src = src;
    trace.dst = router.destination();
    PacketState state = router.start(src);
    NodeId v = src;
    trace.path.push_back(v);
    trace.header.push_back(state.hop);
    while (v != trace.dst) {
        if (trace.hops() >= hop_limit) {
            trace.status = FlowStatus::HopLimit;
            return trace;
        }
        const Step step = router.forward(v, state, links);
        switch (step.status) {
            case StepStatus::Forwarded: break;
            case StepStatus::Stranded: trace.status = FlowStatus::Stranded; return trace;
            case StepStatus::IntervalDisconnected: trace.status = FlowStatus::IntervalDisconnected; return trace;
            case StepStatus::HopOverflow: trace.status = FlowStatus::HopLimit; return trace;
        }
        if (!links.up(v, step.next)) {
            throw std::logic_error("forwarded over a failed or missing edge " + std::to_string(v) + " -> " +
                                   std::to_string(step.next));
        }
        state.inport = v;
        v = step.next;
        trace.path.push_back(v);
        trace.header.push_back(state.hop);
    }
    return trace;
}

FlowTrace route_flow(const Protocol& protocol, const FailureScenario& scenario, NodeId src, NodeId dst,
                     std::uint32_t hop_limit) {
    if (src == dst) throw Error(ErrorCode::InvalidParameter, "route_flow needs src != dst");
    const LinkState links(protocol.topology(), scenario);
    const auto router = protocol.router(dst);
    return route_flow(*router, links, src, hop_limit ? hop_limit : protocol.default_hop_limit());
}

DemandMatrix gravity_demands(const std::vector<NodeId>& nodes, std::uint64_t seed, bool unit_weights) {
    DemandMatrix m;
    m.nodes = nodes;
    m.weights.reserve(nodes.size());
    Rng rng(derive_seed(seed, Stream::Demands));
    for (std::size_t i = 0; i < nodes.size(); ++i) m.weights.push_back(unit_weights ? 1.0 : rng.exponential());
    return m;
}

std::int64_t count_collisions(const std::vector<FlowTrace>& traces, std::uint32_t hop_limit_exclusive) {
    std::unordered_map<std::uint64_t, std::uint32_t> hosts;
    std::int64_t collisions = 0;
    for (const FlowTrace& t : traces) {
        for (std::size_t i = 0; i < t.path.size(); ++i) {
            if (t.path[i] == t.dst || t.header[i] >= hop_limit_exclusive) continue;
            const std::uint64_t key = (std::uint64_t{t.path[i]} << 32) | t.header[i];
            if (++hosts[key] == 2) ++collisions;
        }
    }
    return collisions;
}

namespace {

std::int64_t to_fixed(double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) throw Error(ErrorCode::InvalidParameter, "flow weight must be >= 0");
    return std::llround(weight * kLoadScale);
}

LoadReport aggregate(const Topology& topology, const std::vector<FlowTrace>& traces, bool count_source) {
    LoadReport r;
    r.node_load.assign(topology.node_count(), 0);
    std::unordered_map<std::uint64_t, std::int64_t> edges;
    std::uint64_t hop_sum = 0;
    for (const FlowTrace& t : traces) {
        const std::int64_t w = to_fixed(t.weight);
        ++r.flows;
        for (std::size_t i = count_source ? 0 : 1; i < t.path.size(); ++i) {
            if (t.path[i] != t.dst) r.node_load[t.path[i]] += w;
        }
        for (std::size_t i = 0; i + 1 < t.path.size(); ++i) {
            edges[Edge(t.path[i], t.path[i + 1]).key()] += w;
            r.total_edge_load += w;
        }
        r.total_weight_hops += w * static_cast<std::int64_t>(t.hops());
        if (t.revisits()) ++r.loop_events;
        switch (t.status) {
            case FlowStatus::Delivered:
                ++r.delivered;
                hop_sum += t.hops();
                r.hop_max = std::max(r.hop_max, t.hops());
                break;
            case FlowStatus::HopLimit: ++r.hop_limited; break;
            case FlowStatus::Stranded: ++r.stranded; break;
            case FlowStatus::IntervalDisconnected: ++r.interval_disconnected; break;
        }
    }
    r.undelivered = r.flows - r.delivered;
    r.hop_mean = r.delivered ? static_cast<double>(hop_sum) / static_cast<double>(r.delivered) : 0.0;
    r.edge_load.reserve(edges.size());
    for (const auto& [key, load] : edges) {
        r.edge_load.emplace_back(Edge(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)), load);
    }
    std::sort(r.edge_load.begin(), r.edge_load.end());
    std::int64_t max_edge = 0;
    for (const auto& [e, load] : r.edge_load) max_edge = std::max(max_edge, load);
    r.max_edge_load = static_cast<double>(max_edge) / kLoadScale;
    std::int64_t max_node = 0;
    for (NodeId v = 0; v < r.node_load.size(); ++v) {
        if (r.node_load[v] > max_node) {
            max_node = r.node_load[v];
            r.max_node = v;
        }
    }
    r.max_node_load = static_cast<double>(max_node) / kLoadScale;
    return r;
}

}  // namespace

RunResult run_flows(const Protocol& protocol, const FailureScenario& scenario, const std::vector<FlowSpec>& flows,
                    const EngineOptions& options) {
    const Topology& topology = protocol.topology();
    const LinkState links(topology, scenario);
    const std::uint32_t limit = options.hop_limit ? options.hop_limit : protocol.default_hop_limit();

    std::map<NodeId, std::size_t> router_index;
    std::vector<std::unique_ptr<Router>> routers;
    std::vector<std::size_t> flow_router(flows.size());
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const FlowSpec& f = flows[i];
        if (f.src == f.dst || f.src >= topology.node_count() || f.dst >= topology.node_count()) {
            throw Error(ErrorCode::InvalidParameter, "flow endpoints must be distinct nodes");
        }
        auto [it, fresh] = router_index.try_emplace(f.dst, routers.size());
        if (fresh) routers.push_back(protocol.router(f.dst));
        flow_router[i] = it->second;
    }

    std::vector<FlowTrace> traces(flows.size());
    auto route = [&](std::size_t i) {
        traces[i] = route_flow(*routers[flow_router[i]], links, flows[i].src, limit);
        traces[i].weight = flows[i].weight;
    };
    parallel_for(flows.size(), options.threads, route);

    RunResult result;
    result.report = aggregate(topology, traces, options.count_source);

    if (options.check_collisions && protocol.id() == ProtocolId::SharedPerm) {
        const auto& shared = dynamic_cast<const SharedPermutations&>(protocol);
        std::map<NodeId, std::vector<FlowTrace>> by_destination;
        for (const FlowTrace& t : traces) by_destination[t.dst].push_back(t);
        std::int64_t collisions = 0;
        bool checked = false;
        for (const auto& [d, group] : by_destination) {
            const bool inner = std::any_of(scenario.failed.begin(), scenario.failed.end(),
                                           [d = d](const Edge& e) { return !e.touches(d); });
            if (inner) continue;
            checked = true;
            collisions += count_collisions(group, shared.params().e2);
        }
        if (checked) {
            result.collisions = collisions;
            if (collisions > 0) {
                throw std::logic_error("Shared-Permutations global phase hosted two flows at one (node, hop)");
            }
        }
    }
    if (result.report.total_edge_load != result.report.total_weight_hops) {
        throw std::logic_error("edge load does not match weighted hop count");
    }
    if (options.keep_traces) result.traces = std::move(traces);
    return result;
}

RunResult all_to_one(const Protocol& protocol, const FailureScenario& scenario, NodeId d,
                     const EngineOptions& options) {
    std::vector<FlowSpec> flows;
    for (NodeId s : protocol.topology().endpoints()) {
        if (s != d) flows.push_back({s, d, 1.0});
    }
    return run_flows(protocol, scenario, flows, options);
}

RunResult all_to_all(const Protocol& protocol, const FailureScenario& scenario, const DemandMatrix& demands,
                     const EngineOptions& options) {
    std::vector<FlowSpec> flows;
    const std::size_t m = demands.nodes.size();
    flows.reserve(m * (m - (m > 0)));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (i != j) flows.push_back({demands.nodes[i], demands.nodes[j], demands.demand(i, j)});
        }
    }
    return run_flows(protocol, scenario, flows, options);
}

}  // namespace frr
