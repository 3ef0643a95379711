#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "frr/arborescence.hpp"
#include "frr/disjoint_paths.hpp"

namespace frr {

/// Thread-safe memo of per-destination arborescence sets and per-pair path
/// sets, keyed by (topology kind, n, k, endpoints, count, seed). Entries are
/// deterministic functions of their key, so concurrent duplicate builds are harmless.
class StructureCache {
public:
    std::shared_ptr<const ArborescenceSet> arborescences(const Topology& topology, NodeId d, std::uint32_t count,
                                                         std::uint64_t seed);
    std::shared_ptr<const DisjointPathSet> paths(const Topology& topology, NodeId s, NodeId d, std::uint32_t count);

    [[nodiscard]] std::size_t size() const;

private:
    using Key = std::tuple<int, std::uint32_t, std::uint32_t, NodeId, NodeId, std::uint32_t, std::uint64_t>;

    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const ArborescenceSet>> arborescences_;
    std::map<Key, std::shared_ptr<const DisjointPathSet>> paths_;
};

}  // namespace frr
