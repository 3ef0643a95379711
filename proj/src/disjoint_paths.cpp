#include "frr/disjoint_paths.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "frr/arborescence.hpp"
#include "frr/digraph.hpp"
#include "frr/structure_cache.hpp"

namespace frr {

std::string DisjointPathSet::to_text() const {
    std::ostringstream out;
    out << src << ' ' << dst << ' ' << paths.size() << '\n';
    for (const auto& path : paths) {
        for (std::size_t i = 0; i < path.size(); ++i) out << (i ? " " : "") << path[i];
        out << '\n';
    }
    return out.str();
}

DisjointPathSet parse_paths(const std::string& text) {
    std::istringstream in(text);
    DisjointPathSet set;
    std::size_t count = 0;
    if (!(in >> set.src >> set.dst >> count)) throw Error(ErrorCode::Parse, "paths: missing `src dst count` header");
    std::string line;
    std::getline(in, line);
    while (set.paths.size() < count && std::getline(in, line)) {
        std::istringstream row(line);
        std::vector<NodeId> path;
        NodeId v = 0;
        while (row >> v) path.push_back(v);
        if (!row.eof()) throw Error(ErrorCode::Parse, "paths: malformed path line");
        set.paths.push_back(std::move(path));
    }
    if (set.paths.size() != count) throw Error(ErrorCode::Parse, "paths: fewer lines than announced");
    return set;
}

namespace {

bool path_less(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

Verdict verify_paths(const Topology& topology, const DisjointPathSet& set) {
    std::set<std::uint64_t> edges;
    for (std::size_t i = 0; i < set.paths.size(); ++i) {
        const auto& path = set.paths[i];
        const std::string tag = "path " + std::to_string(i) + ": ";
        if (path.size() < 2 || path.front() != set.src || path.back() != set.dst) {
            return {false, tag + "wrong endpoints"};
        }
        std::set<NodeId> seen(path.begin(), path.end());
        if (seen.size() != path.size()) return {false, tag + "not simple"};
        for (std::size_t j = 0; j + 1 < path.size(); ++j) {
            if (!topology.adjacent(path[j], path[j + 1])) return {false, tag + "hop is not an edge"};
            if (!edges.insert(Edge(path[j], path[j + 1]).key()).second) return {false, tag + "shares an edge"};
        }
        if (i > 0 && path_less(path, set.paths[i - 1])) return {false, tag + "out of order"};
    }
    return {};
}

std::uint32_t path_count(const Topology& topology) {
    return topology.kind() == TopologyKind::Clos ? topology.half_k() : topology.node_count() - 1;
}

DisjointPathSet complete_graph_paths(std::uint32_t n, NodeId s, NodeId d) {
    DisjointPathSet set{s, d, {{s, d}}};
    for (NodeId x = 0; x < n; ++x) {
        if (x != s && x != d) set.paths.push_back({s, x, d});
    }
    return set;
}

DisjointPathSet edge_disjoint_shortest_paths(const Topology& topology, NodeId s, NodeId d, std::uint32_t count) {
    const std::uint32_t n = topology.node_count();
    if (s >= n || d >= n || s == d) throw Error(ErrorCode::InvalidParameter, "paths need distinct endpoints");
    const Digraph g(topology);
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<char> flow(g.arc_count(), 0);
    // Potentials keep reduced costs non-negative so Dijkstra applies.
    std::vector<std::int64_t> potential(n, 0);
    for (std::uint32_t found = 0; found < count; ++found) {
        std::vector<std::int64_t> dist(n, kInf);
        std::vector<std::uint32_t> pred(n, 0);
        std::vector<char> backward(n, 0);
        using Item = std::pair<std::int64_t, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[s] = 0;
        heap.emplace(0, s);
        while (!heap.empty()) {
            const auto [du, u] = heap.top();
            heap.pop();
            if (du != dist[u]) continue;
            auto relax = [&](NodeId w, std::int64_t cost, std::uint32_t arc, bool back) {
                const std::int64_t nd = du + cost + potential[u] - potential[w];
                if (nd < dist[w]) {
                    dist[w] = nd;
                    pred[w] = arc;
                    backward[w] = back;
                    heap.emplace(nd, w);
                }
            };
            for (std::uint32_t a : g.out(u)) {
                // Undo flow on the reverse arc before adding flow on this one.
                if (flow[a ^ 1u]) continue;
                if (!flow[a]) relax(g.head(a), 1, a, false);
            }
            for (std::uint32_t a : g.in(u)) {
                if (flow[a]) relax(g.tail(a), -1, a, true);
            }
        }
        if (dist[d] >= kInf) {
            throw Error(ErrorCode::InsufficientConnectivity, "only " + std::to_string(found) +
                                                                 " edge-disjoint paths between " + std::to_string(s) +
                                                                 " and " + std::to_string(d));
        }
        for (NodeId v = 0; v < n; ++v) {
            if (dist[v] < kInf) potential[v] += dist[v];
        }
        for (NodeId v = d; v != s;) {
            const std::uint32_t a = pred[v];
            if (backward[v]) {
                flow[a] = 0;
                v = g.head(a);
            } else {
                flow[a] = 1;
                v = g.tail(a);
            }
        }
    }
    // Cancel opposite flows on the same edge, then peel off paths.
    for (std::uint32_t a = 0; a < g.arc_count(); a += 2) {
        if (flow[a] && flow[a + 1]) flow[a] = flow[a + 1] = 0;
    }
    DisjointPathSet set{s, d, {}};
    for (std::uint32_t i = 0; i < count; ++i) {
        std::vector<NodeId> path{s};
        std::vector<char> on_path(n, 0);
        on_path[s] = 1;
        NodeId v = s;
        while (v != d) {
            std::uint32_t chosen = g.arc_count();
            for (std::uint32_t a : g.out(v)) {
                if (flow[a]) {
                    chosen = a;
                    break;
                }
            }
            if (chosen == g.arc_count()) throw Error(ErrorCode::PackingFailed, "path decomposition lost the flow");
            flow[chosen] = 0;
            v = g.head(chosen);
            if (on_path[v]) {
                // Cut the cycle just closed; min-cost flows carry none, but stay safe.
                while (path.back() != v) {
                    on_path[path.back()] = 0;
                    path.pop_back();
                }
                continue;
            }
            on_path[v] = 1;
            path.push_back(v);
        }
        set.paths.push_back(std::move(path));
    }
    std::sort(set.paths.begin(), set.paths.end(), path_less);
    return set;
}

// ---------------------------------------------------------------------------
// Square1

namespace {

class Square1Router final : public Router {
public:
    Square1Router(const Square1& protocol, NodeId d) : Router(d), protocol_(&protocol) {}

    Step forward(NodeId v, PacketState& state, const LinkState& links) const override {
        const auto set = protocol_->paths(state.src, destination());
        const auto& all = set->paths;
        while (state.path < all.size()) {
            const auto& path = all[state.path];
            if (state.backtracking) {
                if (state.position > 0) {
                    --state.position;
                    ++state.hop;
                    return Step::to(path[state.position]);
                }
                state.backtracking = false;
                ++state.path;
                continue;
            }
            const NodeId next = path[state.position + 1];
            if (links.up(v, next)) {
                ++state.position;
                ++state.hop;
                return Step::to(next);
            }
            if (state.position == 0) {
                ++state.path;
                continue;
            }
            state.backtracking = true;
        }
        return Step::fail(StepStatus::Stranded);
    }

private:
    const Square1* protocol_;
};

}  // namespace

Square1::Square1(const Topology& topology, const ProtocolOptions& options)
    : topology_(topology), count_(path_count(topology)),
      cache_(options.cache ? options.cache : std::make_shared<StructureCache>()) {}

std::shared_ptr<const DisjointPathSet> Square1::paths(NodeId s, NodeId d) const {
    return cache_->paths(topology_, s, d, count_);
}

std::unique_ptr<Router> Square1::router(NodeId destination) const {
    if (destination >= topology_.node_count()) throw Error(ErrorCode::InvalidParameter, "destination out of range");
    return std::make_unique<Square1Router>(*this, destination);
}

std::uint32_t Square1::default_hop_limit() const {
    return 2 * count_ * (topology_.endpoint_diameter() + 2);
}

}  // namespace frr
