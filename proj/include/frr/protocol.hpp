#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frr/failures.hpp"
#include "frr/topology.hpp"

namespace frr {

enum class ProtocolId {
    ThreeP,
    Intervals,
    SharedPerm,
    ThreePD,
    ThreePID,
    IntervalD,
    IntervalID,
    ADet,
    APrnb,
    ACasa,
    Square1,
};

const char* to_string(ProtocolId id);
std::optional<ProtocolId> parse_protocol(std::string_view name);
std::vector<ProtocolId> all_protocols();

/// Which topology kind a protocol runs on; baselines run on both.
bool supports(ProtocolId id, TopologyKind kind);

/// Inport value for packets injected by their source.
inline constexpr NodeId kLocalPort = kNoNode;

/// Header fields plus the per-flow state the baseline protocols carry.
struct PacketState {
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    /// Hop counter h(p); starts at 0.
    std::uint32_t hop = 0;
    /// Neighbour the packet arrived from, kLocalPort at the source.
    NodeId inport = kLocalPort;

    // Arborescence protocols.
    std::uint32_t tree = 0;
    std::uint32_t switches = 0;
    std::uint64_t rng = 0;

    // Square1.
    std::uint32_t path = 0;
    std::uint32_t position = 0;
    bool backtracking = false;
};

enum class StepStatus {
    Forwarded,
    /// No usable outgoing link (isolated node, stranded arborescence, exhausted paths).
    Stranded,
    /// Every candidate of the successor interval is unreachable.
    IntervalDisconnected,
    /// Shared-Permutations hop field passed E2 + C2 + 1.
    HopOverflow,
};

struct Step {
    StepStatus status = StepStatus::Forwarded;
    NodeId next = kNoNode;

    static Step to(NodeId v) { return {StepStatus::Forwarded, v}; }
    static Step fail(StepStatus s) { return {s, kNoNode}; }
};

/// Forwarding rules of one protocol instance towards one destination.
/// Immutable; forward() is a pure function of (router, node, state, links).
class Router {
public:
    explicit Router(NodeId destination) : destination_(destination) {}
    virtual ~Router() = default;

    [[nodiscard]] NodeId destination() const { return destination_; }

    /// Initial packet state of a flow from `src`.
    [[nodiscard]] virtual PacketState start(NodeId src) const;

    /// One forwarding decision at node v != destination. On success the
    /// state is advanced (hop counter included) and the next node returned.
    virtual Step forward(NodeId v, PacketState& state, const LinkState& links) const = 0;

private:
    NodeId destination_;
};

/// A protocol instance built from (topology, seeds). Per-destination routing
/// state is produced on demand.
class Protocol {
public:
    virtual ~Protocol() = default;
    [[nodiscard]] virtual ProtocolId id() const = 0;
    [[nodiscard]] virtual const Topology& topology() const = 0;
    [[nodiscard]] virtual std::unique_ptr<Router> router(NodeId destination) const = 0;
    /// Default hop limit used by the routing engine.
    [[nodiscard]] virtual std::uint32_t default_hop_limit() const = 0;
};

class StructureCache;

struct ProtocolOptions {
    double alpha = 0.5;
    /// Seed for node-local randomness (permutation stores, per-flow RNG).
    std::uint64_t seed = 1;
    /// Seed for globally agreed permutations (Shared-Permutations).
    std::uint64_t global_seed = 2;
    /// Seed for arborescence packing tie-breaks.
    std::uint64_t packing_seed = 0;
    /// Derive per-destination stores from destination-independent base
    /// permutations (the memory optimisation). false: independent per destination.
    bool destination_independent = true;
    /// Override of the hop window C1 (0 = formula).
    std::uint32_t c1_override = 0;
    /// Shared cache of arborescence and path sets; may be null.
    std::shared_ptr<StructureCache> cache;
};

std::unique_ptr<Protocol> make_protocol(ProtocolId id, const Topology& topology, const ProtocolOptions& options);

}  // namespace frr
