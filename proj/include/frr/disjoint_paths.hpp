#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "frr/protocol.hpp"

namespace frr {

/// Pairwise edge-disjoint simple s->d paths ordered by (length, ids).
struct DisjointPathSet {
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    std::vector<std::vector<NodeId>> paths;

    /// Header `src dst count`, then one line of node ids per path.
    [[nodiscard]] std::string to_text() const;
};

DisjointPathSet parse_paths(const std::string& text);

/// Simple, consistent endpoints, edges exist, pairwise edge-disjoint, sorted.
Verdict verify_paths(const Topology& topology, const DisjointPathSet& set);

/// `count` edge-disjoint s->d paths of minimum total length (successive
/// shortest augmenting paths on unit capacities), decomposed and sorted.
/// Throws InsufficientConnectivity if fewer than `count` exist.
DisjointPathSet edge_disjoint_shortest_paths(const Topology& topology, NodeId s, NodeId d, std::uint32_t count);

/// Closed form for K_n: the direct edge, then s->x->d for every other x.
DisjointPathSet complete_graph_paths(std::uint32_t n, NodeId s, NodeId d);

/// Paths used per pair: k/2 on Clos, n-1 on complete graphs.
std::uint32_t path_count(const Topology& topology);

class StructureCache;

/// Square1: follow the shortest path; on a failed edge walk back to s and
/// try the next path.
class Square1 final : public Protocol {
public:
    Square1(const Topology& topology, const ProtocolOptions& options);

    [[nodiscard]] ProtocolId id() const override { return ProtocolId::Square1; }
    [[nodiscard]] const Topology& topology() const override { return topology_; }
    [[nodiscard]] std::unique_ptr<Router> router(NodeId destination) const override;
    [[nodiscard]] std::uint32_t default_hop_limit() const override;

    [[nodiscard]] std::uint32_t count() const { return count_; }
    [[nodiscard]] std::shared_ptr<const DisjointPathSet> paths(NodeId s, NodeId d) const;

private:
    Topology topology_;
    std::uint32_t count_;
    std::shared_ptr<StructureCache> cache_;
};

}  // namespace frr
