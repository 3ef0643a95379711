#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "frr/partition.hpp"
#include "frr/protocol.hpp"

namespace frr {

/// Interval structure of a Clos network. Bottom, top and block groups (k/2
/// nodes each, ordered by index_in_group) share one split into K parts; the
/// b-th top nodes of all k pods form the vertical group of block b, split by
/// pod index.
class ClosPartition {
public:
    ClosPartition() = default;
    explicit ClosPartition(std::uint32_t k);
    ClosPartition(std::uint32_t k, std::uint32_t intervals);

    /// K = floor(log2 k).
    [[nodiscard]] std::uint32_t intervals() const { return count_; }
    [[nodiscard]] const BalancedSplit& group() const { return group_; }
    [[nodiscard]] const BalancedSplit& vertical() const { return vertical_; }

    /// Interval of a pod or block node by its index in the group.
    [[nodiscard]] std::uint32_t group_interval(const NodeInfo& node) const;
    /// Vertical interval of a top node (by its pod).
    [[nodiscard]] std::uint32_t vertical_interval(const NodeInfo& top) const;

private:
    std::uint32_t count_ = 0;
    BalancedSplit group_;
    BalancedSplit vertical_;
};

/// floor(log2 k).
std::uint32_t floor_log2(std::uint32_t k);

enum class ClosScheme { Interval, ThreeP };

/// Interval-D / Interval-ID (K = floor(log2 k) intervals) and ThreeP-D /
/// ThreeP-ID (one interval, six hop windows of width floor(log2 k)).
class ClosRandomized final : public Protocol {
public:
    static constexpr std::uint32_t kWindows = 6;

    ClosRandomized(const Topology& topology, ClosScheme scheme, bool inport_keyed, const ProtocolOptions& options);

    [[nodiscard]] ProtocolId id() const override;
    [[nodiscard]] const Topology& topology() const override { return topology_; }
    [[nodiscard]] std::unique_ptr<Router> router(NodeId destination) const override;
    [[nodiscard]] std::uint32_t default_hop_limit() const override;

    [[nodiscard]] ClosScheme scheme() const { return scheme_; }
    [[nodiscard]] bool inport_keyed() const { return inport_keyed_; }
    [[nodiscard]] const ClosPartition& partition() const { return partition_; }

    /// Window index in [0, 6): min(hop / floor(log2 k), 5). Always 0 for the interval scheme.
    [[nodiscard]] std::uint32_t window(std::uint32_t hop) const;

    /// Store domain at v for a packet towards d, in id order. Empty when the
    /// rule forwards over a fixed link instead (see direct_target).
    [[nodiscard]] std::vector<NodeId> candidates(NodeId v, NodeId d) const;
    /// Node tried before the store: d itself for tops in d's pod, the top of
    /// d's pod in the block's column for block nodes; kNoNode otherwise.
    [[nodiscard]] NodeId direct_target(NodeId v, NodeId d) const;

    [[nodiscard]] std::uint64_t store_seed(NodeId v, NodeId d, std::uint32_t window, NodeId inport) const;

    /// Store order over candidates(v, d) (full permutation).
    [[nodiscard]] std::vector<NodeId> store(NodeId v, NodeId d, std::uint32_t window, NodeId inport) const;

    [[nodiscard]] Step next_hop(NodeId v, NodeId d, std::uint32_t hop, NodeId inport, const LinkState& links) const;

private:
    Topology topology_;
    ClosScheme scheme_;
    bool inport_keyed_;
    ProtocolOptions options_;
    ClosPartition partition_;
    std::uint32_t window_width_;
};

}  // namespace frr
