#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "frr/protocol.hpp"

namespace frr {

/// ℓ spanning in-arborescences rooted at `root`. parents[i][v] is the parent
/// of v in tree i (kNoNode for the root).
struct ArborescenceSet {
    NodeId root = kNoNode;
    std::vector<std::vector<NodeId>> parents;

    [[nodiscard]] std::uint32_t count() const { return static_cast<std::uint32_t>(parents.size()); }
    /// Hops from v to the root along tree i.
    [[nodiscard]] std::uint32_t depth(std::uint32_t tree, NodeId v) const;

    /// Header `root count n`, then one `tree node parent` line per arc.
    [[nodiscard]] std::string to_text() const;
};

ArborescenceSet parse_arborescences(const std::string& text);

/// Spanning (every non-root node has a parent), rooted (parent chains end at
/// the root without cycles), arcs exist in the topology, and no directed arc
/// appears in two trees.
Verdict verify_arborescences(const Topology& topology, const ArborescenceSet& set);

/// Number of trees used for a destination: k/2 on Clos, n-1 on complete graphs.
std::uint32_t arborescence_count(const Topology& topology);

struct PackingStats {
    std::uint32_t swaps = 0;
    bool used_fallback = false;
};

/// Round-robin greedy growth with local arc swaps; falls back to an exact
/// augmenting construction when the greedy stalls. The result is verified
/// before it is returned. Throws InsufficientConnectivity if some node has
/// fewer than `count` arc-disjoint paths to d, PackingFailed if verification fails.
ArborescenceSet compute_arborescences(const Topology& topology, NodeId d, std::uint32_t count, std::uint64_t seed,
                                      PackingStats* stats = nullptr);

/// Exact construction only (no greedy phase).
ArborescenceSet compute_arborescences_exact(const Topology& topology, NodeId d, std::uint32_t count,
                                            std::uint64_t seed);

/// Closed form for K_n: tree i hangs every node below the i-th non-root node.
ArborescenceSet complete_graph_arborescences(std::uint32_t n, NodeId d);

/// Switching matrix for CASA over GF(q), q = ℓ a prime power:
/// row i lists i + g^t for t = 0..q-2 with g primitive, so each row is a
/// permutation of the other indices and no two rows agree in any position.
class BibdMatrix {
public:
    explicit BibdMatrix(std::uint32_t order);

    [[nodiscard]] std::uint32_t order() const { return order_; }
    [[nodiscard]] const std::vector<std::uint32_t>& row(std::uint32_t i) const { return rows_[i]; }

private:
    std::uint32_t order_;
    std::vector<std::vector<std::uint32_t>> rows_;
};

/// q = p^m with p prime; returns false otherwise.
bool prime_power(std::uint32_t q, std::uint32_t* p = nullptr, std::uint32_t* m = nullptr);

enum class SwitchMode { Det, Prnb, Casa };

/// Tree to switch to from tree i after `switches` earlier switches.
/// Prnb draws from `rng_state` (advanced in place).
std::uint32_t next_arborescence(SwitchMode mode, std::uint32_t i, std::uint32_t count, std::uint64_t& rng_state,
                                const BibdMatrix* matrix, std::uint32_t switches);

class StructureCache;

/// A-Det, A-PRNB and A-CASA.
class ArborescenceProtocol final : public Protocol {
public:
    ArborescenceProtocol(const Topology& topology, SwitchMode mode, const ProtocolOptions& options);

    [[nodiscard]] ProtocolId id() const override;
    [[nodiscard]] const Topology& topology() const override { return topology_; }
    [[nodiscard]] std::unique_ptr<Router> router(NodeId destination) const override;
    [[nodiscard]] std::uint32_t default_hop_limit() const override;

    [[nodiscard]] SwitchMode mode() const { return mode_; }
    [[nodiscard]] std::uint32_t count() const { return count_; }
    [[nodiscard]] std::shared_ptr<const ArborescenceSet> arborescences(NodeId destination) const;

private:
    Topology topology_;
    SwitchMode mode_;
    ProtocolOptions options_;
    std::uint32_t count_;
    std::shared_ptr<StructureCache> cache_;
    std::shared_ptr<const BibdMatrix> matrix_;
};

}  // namespace frr
