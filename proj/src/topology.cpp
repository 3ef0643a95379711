#include "frr/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace frr {

const char* to_string(TopologyKind kind) {
    return kind == TopologyKind::Complete ? "complete" : "clos";
}

const char* to_string(NodeRole role) {
    switch (role) {
        case NodeRole::Plain: return "plain";
        case NodeRole::Bottom: return "bottom";
        case NodeRole::Top: return "top";
        case NodeRole::Block: return "block";
    }
    return "?";
}

std::uint64_t Topology::edge_count() const {
    if (kind_ == TopologyKind::Complete) {
        return static_cast<std::uint64_t>(n_) * (n_ - 1) / 2;
    }
    return edges_.size();
}

bool Topology::adjacent(NodeId u, NodeId v) const {
    if (u == v || u >= n_ || v >= n_) return false;
    if (kind_ == TopologyKind::Complete) return true;
    const auto& a = nodes_[u];
    const auto& b = nodes_[v];
    auto pair = [&](NodeRole x, NodeRole y) {
        return (a.role == x && b.role == y) || (a.role == y && b.role == x);
    };
    if (pair(NodeRole::Top, NodeRole::Bottom)) return a.pod == b.pod;
    if (pair(NodeRole::Top, NodeRole::Block)) {
        const auto& top = a.role == NodeRole::Top ? a : b;
        const auto& blk = a.role == NodeRole::Block ? a : b;
        return top.index_in_group == blk.block;
    }
    return false;
}

std::uint32_t Topology::degree(NodeId v) const {
    if (kind_ == TopologyKind::Complete) return n_ - 1;
    return static_cast<std::uint32_t>(adjacency_[v].size());
}

std::vector<NodeId> Topology::neighbors(NodeId v) const {
    if (kind_ == TopologyKind::Clos) return adjacency_[v];
    std::vector<NodeId> out;
    out.reserve(n_ - 1);
    for (NodeId u = 0; u < n_; ++u) {
        if (u != v) out.push_back(u);
    }
    return out;
}

std::uint64_t Topology::edge_index(Edge e) const {
    if (!adjacent(e.u, e.v)) {
        throw Error(ErrorCode::InvalidParameter, "edge_index: not an edge");
    }
    if (kind_ == TopologyKind::Complete) {
        const std::uint64_t u = e.u;
        const std::uint64_t n = n_;
        return u * n - u * (u + 1) / 2 + (e.v - u - 1);
    }
    const auto& adj = adjacency_[e.u];
    auto it = std::lower_bound(adj.begin(), adj.end(), e.v);
    return adjacency_edge_[e.u][static_cast<std::size_t>(it - adj.begin())];
}

Edge Topology::edge_at(std::uint64_t index) const {
    if (index >= edge_count()) {
        throw Error(ErrorCode::InvalidParameter, "edge_at: index out of range");
    }
    if (kind_ == TopologyKind::Clos) return edges_[index];
    // Row u starts at u*n - u(u+1)/2; find the last row start <= index.
    const std::uint64_t n = n_;
    auto row_start = [n](std::uint64_t u) { return u * n - u * (u + 1) / 2; };
    std::uint64_t lo = 0;
    std::uint64_t hi = n - 2;
    while (lo < hi) {
        const std::uint64_t mid = (lo + hi + 1) / 2;
        if (row_start(mid) <= index) lo = mid; else hi = mid - 1;
    }
    const auto u = static_cast<NodeId>(lo);
    const auto v = static_cast<NodeId>(index - row_start(lo) + lo + 1);
    return Edge(u, v);
}

std::vector<NodeId> Topology::endpoints() const {
    std::vector<NodeId> out;
    for (const auto& node : nodes_) {
        if (node.role == NodeRole::Plain || node.role == NodeRole::Bottom) out.push_back(node.id);
    }
    return out;
}

NodeId Topology::block_node(std::uint32_t block, std::uint32_t index) const {
    return block * half_k() + index;
}

NodeId Topology::top_node(std::uint32_t pod, std::uint32_t index) const {
    return half_k() * half_k() + pod * k_ + index;
}

NodeId Topology::bottom_node(std::uint32_t pod, std::uint32_t index) const {
    return half_k() * half_k() + pod * k_ + half_k() + index;
}

std::string Topology::to_text() const {
    std::ostringstream out;
    out << to_string(kind_) << ' ' << n_ << ' ' << k_ << '\n';
    const std::uint64_t m = edge_count();
    for (std::uint64_t i = 0; i < m; ++i) {
        const Edge e = edge_at(i);
        out << e.u << ' ' << e.v << '\n';
    }
    return out.str();
}

Topology build_complete(std::uint32_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidSize, "complete graph needs n >= 2");
    Topology t;
    t.kind_ = TopologyKind::Complete;
    t.n_ = n;
    t.nodes_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        t.nodes_[v] = NodeInfo{v, NodeRole::Plain, -1, -1, static_cast<int>(v)};
    }
    return t;
}

Topology build_clos(std::uint32_t k) {
    if (k < 4 || k % 2 != 0) {
        throw Error(ErrorCode::InvalidParameter, "Clos needs an even k >= 4, got " + std::to_string(k));
    }
    Topology t;
    t.kind_ = TopologyKind::Clos;
    t.k_ = k;
    const std::uint32_t h = k / 2;
    t.n_ = h * h + k * k;
    t.nodes_.resize(t.n_);
    for (std::uint32_t b = 0; b < h; ++b) {
        for (std::uint32_t x = 0; x < h; ++x) {
            const NodeId id = t.block_node(b, x);
            t.nodes_[id] = NodeInfo{id, NodeRole::Block, -1, static_cast<int>(b), static_cast<int>(x)};
        }
    }
    for (std::uint32_t p = 0; p < k; ++p) {
        for (std::uint32_t i = 0; i < h; ++i) {
            const NodeId top = t.top_node(p, i);
            const NodeId bottom = t.bottom_node(p, i);
            t.nodes_[top] = NodeInfo{top, NodeRole::Top, static_cast<int>(p), -1, static_cast<int>(i)};
            t.nodes_[bottom] = NodeInfo{bottom, NodeRole::Bottom, static_cast<int>(p), -1, static_cast<int>(i)};
        }
    }

    t.adjacency_.assign(t.n_, {});
    for (std::uint32_t p = 0; p < k; ++p) {
        for (std::uint32_t i = 0; i < h; ++i) {
            for (std::uint32_t j = 0; j < h; ++j) {
                t.edges_.emplace_back(t.top_node(p, i), t.bottom_node(p, j));
            }
            for (std::uint32_t x = 0; x < h; ++x) {
                t.edges_.emplace_back(t.top_node(p, i), t.block_node(i, x));
            }
        }
    }
    std::sort(t.edges_.begin(), t.edges_.end());
    for (const Edge& e : t.edges_) {
        t.adjacency_[e.u].push_back(e.v);
        t.adjacency_[e.v].push_back(e.u);
    }
    t.adjacency_edge_.assign(t.n_, {});
    for (NodeId v = 0; v < t.n_; ++v) {
        auto& adj = t.adjacency_[v];
        std::sort(adj.begin(), adj.end());
        auto& ids = t.adjacency_edge_[v];
        ids.reserve(adj.size());
        for (NodeId u : adj) {
            auto it = std::lower_bound(t.edges_.begin(), t.edges_.end(), Edge(u, v));
            ids.push_back(static_cast<std::uint32_t>(it - t.edges_.begin()));
        }
    }
    return t;
}

Topology build_from_header(const std::string& kind, std::uint32_t n, std::uint32_t k) {
    if (kind == "complete") {
        if (k != 0) throw Error(ErrorCode::Parse, "complete topology header must carry k = 0");
        return build_complete(n);
    }
    if (kind == "clos") {
        Topology t = build_clos(k);
        if (t.node_count() != n) {
            throw Error(ErrorCode::Parse, "Clos header node count does not match k");
        }
        return t;
    }
    throw Error(ErrorCode::Parse, "unknown topology kind '" + kind + "'");
}

std::vector<std::uint32_t> bfs_distances(const Topology& topology, NodeId source) {
    constexpr auto kInf = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(topology.node_count(), kInf);
    std::deque<NodeId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        for (NodeId u : topology.neighbors(v)) {
            if (dist[u] == kInf) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

}  // namespace frr
