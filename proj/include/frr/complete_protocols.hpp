#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "frr/partition.hpp"
#include "frr/protocol.hpp"

namespace frr {

enum class CompleteProtocol { ThreeP, Intervals, SharedPerm };

/// Derived constants of the complete-graph protocols.
struct ProtocolParams {
    std::uint32_t n = 0;
    double alpha = 0.0;
    /// log_{1/alpha} n in real arithmetic.
    double log_base = 0.0;
    /// Hop window of 3-Permutations, global phase length of Shared-Permutations.
    std::uint32_t c1 = 0;
    /// Local phase length of Shared-Permutations (0 otherwise).
    std::uint32_t c2 = 0;
    /// E2 = C1 + 1.
    std::uint32_t e2 = 0;
    /// Truncated store prefix length ceil(3 log_{1/alpha} n).
    std::uint32_t prefix_length = 0;
    /// Intervals: K_int and the (real) interval size I = n / K_int.
    std::uint32_t interval_count = 0;
    double interval_size = 0.0;
    /// Permutations per destination held by one node (3, 1, or C1+1 + C2+2).
    std::uint32_t num_perms = 0;
};

/// Throws InvalidParameter unless 0 < alpha < 1 and n >= 4.
ProtocolParams params_for(std::uint32_t n, double alpha, CompleteProtocol protocol, std::uint32_t c1_override = 0);

/// Candidate set of a permutation store: the ids in [lo, hi) minus up to two
/// excluded ids. Index i maps to the i-th remaining id in increasing order.
struct StoreDomain {
    NodeId lo = 0;
    NodeId hi = 0;
    std::array<NodeId, 2> excluded{kNoNode, kNoNode};

    static StoreDomain range(NodeId lo, NodeId hi, NodeId skip_a = kNoNode, NodeId skip_b = kNoNode);

    [[nodiscard]] std::uint32_t size() const;
    [[nodiscard]] NodeId at(std::uint32_t index) const;
    [[nodiscard]] bool contains(NodeId v) const;
};

/// Prefix of a seeded random permutation over a StoreDomain. Lookups walk the
/// prefix and, once it is used up, continue the same permutation L entries
/// at a time until the domain is exhausted.
class TruncatedPermStore {
public:
    TruncatedPermStore(NodeId owner, StoreDomain domain, std::uint64_t seed, std::uint32_t prefix_length,
                       NodeId skip = kNoNode);

    [[nodiscard]] NodeId owner() const { return owner_; }
    [[nodiscard]] const std::vector<NodeId>& prefix() const { return prefix_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    /// First entry whose link to the owner is up; nullopt if none in the domain.
    [[nodiscard]] std::optional<NodeId> first_live(const LinkState& links) const;

private:
    NodeId owner_;
    StoreDomain domain_;
    std::uint64_t seed_;
    NodeId skip_;
    std::vector<NodeId> prefix_;
};

/// Lookup without materialising a store: walks the permutation seeded by
/// `seed` over `domain`, skipping `skip`, and returns the first entry reachable
/// from `owner`.
std::optional<NodeId> first_live_entry(NodeId owner, const StoreDomain& domain, std::uint64_t seed, NodeId skip,
                                       const LinkState& links);

/// 3-Permutations.
class ThreePermutations final : public Protocol {
public:
    ThreePermutations(const Topology& topology, const ProtocolOptions& options);

    [[nodiscard]] ProtocolId id() const override { return ProtocolId::ThreeP; }
    [[nodiscard]] const Topology& topology() const override { return topology_; }
    [[nodiscard]] std::unique_ptr<Router> router(NodeId destination) const override;
    [[nodiscard]] std::uint32_t default_hop_limit() const override;

    [[nodiscard]] const ProtocolParams& params() const { return params_; }

    /// Store (v, d, slot), slot in {1, 2, 3}.
    [[nodiscard]] TruncatedPermStore store(NodeId v, NodeId d, std::uint32_t slot) const;

    /// Slot consulted at a given hop count: max{ j in 1..3 : hop >= (j-1) C1 }.
    [[nodiscard]] static std::uint32_t slot_for_hop(std::uint32_t hop, std::uint32_t c1);

    /// Fixture hook: pin the full candidate order of store (v, *, slot).
    /// Pinned orders take precedence over the seeded permutation.
    void pin_order(NodeId v, std::uint32_t slot, std::vector<NodeId> order);

    /// Next hop at v for a packet with the given hop count (caller bumps the hop).
    [[nodiscard]] Step next_hop(NodeId v, NodeId d, std::uint32_t hop, const LinkState& links) const;

private:
    [[nodiscard]] StoreDomain domain(NodeId v, NodeId d) const;
    [[nodiscard]] std::uint64_t store_seed(NodeId v, NodeId d, std::uint32_t slot) const;

    Topology topology_;
    ProtocolParams params_;
    ProtocolOptions options_;
    std::vector<std::pair<std::uint64_t, std::vector<NodeId>>> pinned_;
};

/// Intervals.
class Intervals final : public Protocol {
public:
    Intervals(const Topology& topology, const ProtocolOptions& options);

    [[nodiscard]] ProtocolId id() const override { return ProtocolId::Intervals; }
    [[nodiscard]] const Topology& topology() const override { return topology_; }
    [[nodiscard]] std::unique_ptr<Router> router(NodeId destination) const override;
    [[nodiscard]] std::uint32_t default_hop_limit() const override;

    [[nodiscard]] const ProtocolParams& params() const { return params_; }
    [[nodiscard]] const IntervalPartition& partition() const { return partition_; }

    [[nodiscard]] TruncatedPermStore store(NodeId v, NodeId d) const;
    [[nodiscard]] Step next_hop(NodeId v, NodeId d, const LinkState& links) const;

private:
    [[nodiscard]] StoreDomain domain(NodeId v, NodeId d) const;
    [[nodiscard]] std::uint64_t store_seed(NodeId v, NodeId d) const;

    Topology topology_;
    ProtocolParams params_;
    ProtocolOptions options_;
    IntervalPartition partition_;
};

/// Globally agreed permutations pi_{h,d}, h = 0..C1, of V \ {d}.
class GlobalPermutations {
public:
    GlobalPermutations(std::uint32_t n, NodeId d, std::uint32_t count, std::uint64_t global_seed);

    [[nodiscard]] std::uint32_t count() const { return static_cast<std::uint32_t>(orders_.size()); }
    [[nodiscard]] const std::vector<NodeId>& order(std::uint32_t h) const { return orders_[h]; }
    /// Cyclic successor of v in pi_{h,d}.
    [[nodiscard]] NodeId successor(std::uint32_t h, NodeId v) const;

private:
    std::vector<std::vector<NodeId>> orders_;
    std::vector<std::vector<std::uint32_t>> positions_;
};

/// Shared-Permutations.
class SharedPermutations final : public Protocol {
public:
    SharedPermutations(const Topology& topology, const ProtocolOptions& options);

    [[nodiscard]] ProtocolId id() const override { return ProtocolId::SharedPerm; }
    [[nodiscard]] const Topology& topology() const override { return topology_; }
    [[nodiscard]] std::unique_ptr<Router> router(NodeId destination) const override;
    [[nodiscard]] std::uint32_t default_hop_limit() const override;

    [[nodiscard]] const ProtocolParams& params() const { return params_; }
    [[nodiscard]] GlobalPermutations global_permutations(NodeId d) const;
    /// Local store pi_{v,j,d}, j in [E2, E2 + C2 + 1].
    [[nodiscard]] TruncatedPermStore local_store(NodeId v, NodeId d, std::uint32_t j) const;

    struct Decision {
        Step step;
        std::uint32_t hop = 0;  // header value after forwarding
    };
    [[nodiscard]] Decision next_hop(const GlobalPermutations& global, NodeId v, NodeId d, std::uint32_t hop,
                                    const LinkState& links) const;

private:
    [[nodiscard]] std::uint64_t local_seed(NodeId v, NodeId d, std::uint32_t j) const;

    Topology topology_;
    ProtocolParams params_;
    ProtocolOptions options_;
};

}  // namespace frr
