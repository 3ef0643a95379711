#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "frr/partition.hpp"
#include "frr/topology.hpp"

namespace frr {

/// A set of failed undirected edges. `failed` is sorted and duplicate free.
struct FailureScenario {
    std::vector<Edge> failed;
    std::optional<NodeId> destination;
    double alpha = 0.0;

    /// (|F^(d)|, |F^(in)|) with respect to `destination`; (0, |failed|) when unset.
    [[nodiscard]] std::pair<std::uint64_t, std::uint64_t> split() const;
    [[nodiscard]] bool has_inner_failures() const { return split().second > 0; }

    /// Header `kind n k` followed by one sorted `u v` line per failed edge.
    [[nodiscard]] std::string to_text(const Topology& topology) const;
};

struct ParsedScenario {
    Topology topology;
    FailureScenario scenario;
};

/// Inverse of FailureScenario::to_text. Rejects edges that are not in the topology.
ParsedScenario parse_scenario(const std::string& text);

/// Constant-time "is the link between u and v usable" oracle.
class LinkState {
public:
    LinkState(const Topology& topology, const FailureScenario& scenario);

    [[nodiscard]] bool up(NodeId u, NodeId v) const {
        return topology_->adjacent(u, v) && !failed_.contains(Edge(u, v).key());
    }
    [[nodiscard]] bool failed(NodeId u, NodeId v) const { return failed_.contains(Edge(u, v).key()); }
    [[nodiscard]] const Topology& topology() const { return *topology_; }

private:
    const Topology* topology_;
    std::unordered_set<std::uint64_t> failed_;
};

struct LowestIds {};
struct Seeded {
    std::uint64_t seed = 0;
};
/// Oblivious selector: depends only on node ids or on its own seed.
using Selector = std::variant<LowestIds, Seeded>;

/// Fails exactly round-half-up(p * |E|) distinct edges chosen uniformly.
FailureScenario fail_random_fraction(const Topology& topology, double p, std::uint64_t seed);

/// Fails exactly `count` uniformly chosen distinct edges.
FailureScenario fail_random_count(const Topology& topology, std::uint64_t count, std::uint64_t seed);

/// Fails `count` destination edges incident to d.
FailureScenario fail_destination_edges(const Topology& topology, NodeId d, std::uint32_t count, const Selector& selector);

/// Fails destination edges (v, d) for `budget` nodes v of interval R_i.
FailureScenario fail_interval_targeted(const Topology& topology, NodeId d, std::uint32_t interval_index,
                                       const IntervalPartition& partition, std::uint32_t budget,
                                       const Selector& selector);

enum class BudgetMode { GlobalAlphaN, PerIntervalAlphaI };

struct BudgetCheck {
    bool ok = true;
    std::uint64_t destination_failures = 0;
    std::uint64_t inner_failures = 0;
    /// Largest per-interval count |F^(d)_i| + |F^(in)_i| (per-interval mode only).
    std::uint64_t worst_interval_failures = 0;
    double limit = 0.0;
};

/// GlobalAlphaN: ok iff |failed| <= alpha * n.
/// PerIntervalAlphaI: ok iff for every interval R_i the failed destination
/// edges of R_i plus failed inner edges from R_i into its successor number at
/// most alpha * I, where I = n / K.
BudgetCheck validate_budget(const FailureScenario& scenario, const Topology& topology, BudgetMode mode, double alpha,
                            const IntervalPartition* partition = nullptr);

}  // namespace frr
