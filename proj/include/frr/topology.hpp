#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "frr/common.hpp"

namespace frr {

enum class TopologyKind { Complete, Clos };
enum class NodeRole { Plain, Bottom, Top, Block };

const char* to_string(TopologyKind kind);
const char* to_string(NodeRole role);

/// Per-node coordinates. Indices are zero based: `pod` in [0, k),
/// `block` and `index_in_group` in [0, k/2).
struct NodeInfo {
    NodeId id = 0;
    NodeRole role = NodeRole::Plain;
    int pod = -1;
    int block = -1;
    int index_in_group = 0;
};

/// Immutable undirected topology: either a complete graph on n nodes or a
/// three-layer Clos (fat-tree) with port parameter k.
///
/// Clos id layout: all block nodes first (block-major, then index in block),
/// then per pod the k/2 top nodes followed by the k/2 bottom nodes.
///
/// Complete graphs do not materialise their edge list; edges are addressed
/// through a closed-form index so that n in the thousands stays cheap.
class Topology {
public:
    [[nodiscard]] TopologyKind kind() const { return kind_; }
    [[nodiscard]] std::uint32_t node_count() const { return n_; }
    /// Clos port parameter, 0 for complete graphs.
    [[nodiscard]] std::uint32_t k() const { return k_; }
    [[nodiscard]] std::uint32_t half_k() const { return k_ / 2; }
    [[nodiscard]] std::uint64_t edge_count() const;

    [[nodiscard]] const NodeInfo& info(NodeId v) const { return nodes_[v]; }
    [[nodiscard]] std::span<const NodeInfo> nodes() const { return nodes_; }

    [[nodiscard]] bool adjacent(NodeId u, NodeId v) const;
    [[nodiscard]] std::uint32_t degree(NodeId v) const;
    [[nodiscard]] std::vector<NodeId> neighbors(NodeId v) const;

    /// Dense index of an existing edge in [0, edge_count()).
    [[nodiscard]] std::uint64_t edge_index(Edge e) const;
    [[nodiscard]] Edge edge_at(std::uint64_t index) const;

    /// Nodes that source and sink traffic: all nodes of a complete graph,
    /// bottom nodes of a Clos.
    [[nodiscard]] std::vector<NodeId> endpoints() const;

    /// Shortest-path diameter between endpoints (1 for complete, 4 for Clos).
    [[nodiscard]] std::uint32_t endpoint_diameter() const { return kind_ == TopologyKind::Complete ? 1 : 4; }

    // Clos coordinates.
    [[nodiscard]] NodeId block_node(std::uint32_t block, std::uint32_t index) const;
    [[nodiscard]] NodeId top_node(std::uint32_t pod, std::uint32_t index) const;
    [[nodiscard]] NodeId bottom_node(std::uint32_t pod, std::uint32_t index) const;

    /// Serialises as `kind n k` followed by one `u v` line per edge.
    [[nodiscard]] std::string to_text() const;

    friend Topology build_complete(std::uint32_t n);
    friend Topology build_clos(std::uint32_t k);

private:
    Topology() = default;

    TopologyKind kind_ = TopologyKind::Complete;
    std::uint32_t n_ = 0;
    std::uint32_t k_ = 0;
    std::vector<NodeInfo> nodes_;
    // Clos only: sorted adjacency and the edge list in index order.
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::vector<std::uint32_t>> adjacency_edge_;
    std::vector<Edge> edges_;
};

/// Complete graph K_n. Throws InvalidSize for n < 2.
Topology build_complete(std::uint32_t n);

/// Three-layer Clos with k pods and k/2 blocks. Throws InvalidParameter for
/// odd k or k < 4.
Topology build_clos(std::uint32_t k);

/// Parses the `kind n k` header used by topology and scenario files.
Topology build_from_header(const std::string& kind, std::uint32_t n, std::uint32_t k);

/// Breadth-first hop distances from `source` over live edges of the full topology.
std::vector<std::uint32_t> bfs_distances(const Topology& topology, NodeId source);

}  // namespace frr
