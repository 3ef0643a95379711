#include "frr/structure_cache.hpp"

namespace frr {

std::shared_ptr<const ArborescenceSet> StructureCache::arborescences(const Topology& topology, NodeId d,
                                                                     std::uint32_t count, std::uint64_t seed) {
    const Key key{static_cast<int>(topology.kind()), topology.node_count(), topology.k(), d, kNoNode, count, seed};
    {
        std::lock_guard lock(mutex_);
        if (auto it = arborescences_.find(key); it != arborescences_.end()) return it->second;
    }
    auto built = std::make_shared<const ArborescenceSet>(
        topology.kind() == TopologyKind::Complete && count == topology.node_count() - 1
            ? complete_graph_arborescences(topology.node_count(), d)
            : compute_arborescences(topology, d, count, seed));
    std::lock_guard lock(mutex_);
    return arborescences_.try_emplace(key, std::move(built)).first->second;
}

std::shared_ptr<const DisjointPathSet> StructureCache::paths(const Topology& topology, NodeId s, NodeId d,
                                                             std::uint32_t count) {
    const Key key{static_cast<int>(topology.kind()), topology.node_count(), topology.k(), s, d, count, 0};
    {
        std::lock_guard lock(mutex_);
        if (auto it = paths_.find(key); it != paths_.end()) return it->second;
    }
    auto built = std::make_shared<const DisjointPathSet>(
        topology.kind() == TopologyKind::Complete && count == topology.node_count() - 1
            ? complete_graph_paths(topology.node_count(), s, d)
            : edge_disjoint_shortest_paths(topology, s, d, count));
    std::lock_guard lock(mutex_);
    return paths_.try_emplace(key, std::move(built)).first->second;
}

std::size_t StructureCache::size() const {
    std::lock_guard lock(mutex_);
    return arborescences_.size() + paths_.size();
}

}  // namespace frr
