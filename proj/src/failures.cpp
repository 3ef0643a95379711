#include "frr/failures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frr/rng.hpp"

namespace frr {

namespace {

void normalise(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::vector<std::uint32_t> pick(std::uint32_t size, std::uint32_t count, const Selector& selector) {
    if (std::holds_alternative<LowestIds>(selector)) {
        std::vector<std::uint32_t> out(count);
        for (std::uint32_t i = 0; i < count; ++i) out[i] = i;
        return out;
    }
    PermutationStream stream(derive_seed(std::get<Seeded>(selector).seed, Stream::Adversary), size);
    return stream.take(count);
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> FailureScenario::split() const {
    if (!destination) return {0, failed.size()};
    std::uint64_t at_d = 0;
    for (const Edge& e : failed) {
        if (e.touches(*destination)) ++at_d;
    }
    return {at_d, failed.size() - at_d};
}

std::string FailureScenario::to_text(const Topology& topology) const {
    std::ostringstream out;
    out << to_string(topology.kind()) << ' ' << topology.node_count() << ' ' << topology.k() << '\n';
    for (const Edge& e : failed) out << e.u << ' ' << e.v << '\n';
    return out.str();
}

ParsedScenario parse_scenario(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    if (!(in >> kind >> n >> k)) throw Error(ErrorCode::Parse, "scenario: missing `kind n k` header");
    ParsedScenario parsed{build_from_header(kind, n, k), {}};
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    while (in >> u >> v) {
        if (u >= n || v >= n || !parsed.topology.adjacent(static_cast<NodeId>(u), static_cast<NodeId>(v))) {
            throw Error(ErrorCode::Parse, "scenario: " + std::to_string(u) + " " + std::to_string(v) + " is not an edge");
        }
        parsed.scenario.failed.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    if (!in.eof()) throw Error(ErrorCode::Parse, "scenario: malformed edge line");
    const std::size_t before = parsed.scenario.failed.size();
    normalise(parsed.scenario.failed);
    if (parsed.scenario.failed.size() != before) throw Error(ErrorCode::Parse, "scenario: duplicate edge");
    return parsed;
}

LinkState::LinkState(const Topology& topology, const FailureScenario& scenario) : topology_(&topology) {
    failed_.reserve(scenario.failed.size() * 2);
    for (const Edge& e : scenario.failed) failed_.insert(e.key());
}

FailureScenario fail_random_count(const Topology& topology, std::uint64_t count, std::uint64_t seed) {
    const std::uint64_t m = topology.edge_count();
    if (count > m) throw Error(ErrorCode::BudgetExceeded, "cannot fail more edges than exist");
    Rng rng(derive_seed(seed, Stream::Adversary));
    // Floyd's sampling; for dense selections sample the survivors instead.
    const bool complement = count > m / 2;
    const std::uint64_t draw = complement ? m - count : count;
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(draw * 2);
    for (std::uint64_t j = m - draw; j < m; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    FailureScenario s;
    s.failed.reserve(count);
    if (complement) {
        for (std::uint64_t i = 0; i < m; ++i) {
            if (!chosen.contains(i)) s.failed.push_back(topology.edge_at(i));
        }
    } else {
        for (std::uint64_t i : chosen) s.failed.push_back(topology.edge_at(i));
    }
    normalise(s.failed);
    return s;
}

FailureScenario fail_random_fraction(const Topology& topology, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidParameter, "failure fraction must lie in [0, 1]");
    const auto count = static_cast<std::uint64_t>(std::floor(p * static_cast<double>(topology.edge_count()) + 0.5));
    return fail_random_count(topology, std::min(count, topology.edge_count()), seed);
}

FailureScenario fail_destination_edges(const Topology& topology, NodeId d, std::uint32_t count, const Selector& selector) {
    if (d >= topology.node_count()) throw Error(ErrorCode::InvalidParameter, "destination out of range");
    const std::vector<NodeId> incident = topology.neighbors(d);
    if (count > incident.size()) {
        throw Error(ErrorCode::BudgetExceeded, "cannot fail " + std::to_string(count) + " edges at a node of degree " +
                                                   std::to_string(incident.size()));
    }
    FailureScenario s;
    s.destination = d;
    for (std::uint32_t i : pick(static_cast<std::uint32_t>(incident.size()), count, selector)) {
        s.failed.emplace_back(incident[i], d);
    }
    normalise(s.failed);
    return s;
}

FailureScenario fail_interval_targeted(const Topology& topology, NodeId d, std::uint32_t interval_index,
                                       const IntervalPartition& partition, std::uint32_t budget,
                                       const Selector& selector) {
    if (topology.kind() != TopologyKind::Complete || partition.size() != topology.node_count()) {
        throw Error(ErrorCode::ModeMismatch, "interval targeting needs a complete graph and a matching partition");
    }
    if (interval_index >= partition.parts()) throw Error(ErrorCode::InvalidParameter, "interval index out of range");
    std::vector<NodeId> members;
    for (NodeId v = partition.begin(interval_index); v < partition.end(interval_index); ++v) {
        if (v != d) members.push_back(v);
    }
    if (budget > members.size()) {
        throw Error(ErrorCode::BudgetExceeded, "budget " + std::to_string(budget) + " exceeds interval size " +
                                                   std::to_string(members.size()));
    }
    FailureScenario s;
    s.destination = d;
    for (std::uint32_t i : pick(static_cast<std::uint32_t>(members.size()), budget, selector)) {
        s.failed.emplace_back(members[i], d);
    }
    normalise(s.failed);
    return s;
}

BudgetCheck validate_budget(const FailureScenario& scenario, const Topology& topology, BudgetMode mode, double alpha,
                            const IntervalPartition* partition) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
    if ((mode == BudgetMode::PerIntervalAlphaI) != (partition != nullptr)) {
        throw Error(ErrorCode::ModeMismatch, "a partition is required exactly for the per-interval budget mode");
    }
    BudgetCheck check;
    std::tie(check.destination_failures, check.inner_failures) = scenario.split();
    constexpr double kSlack = 1e-9;
    if (mode == BudgetMode::GlobalAlphaN) {
        check.limit = alpha * topology.node_count();
        check.ok = static_cast<double>(scenario.failed.size()) <= check.limit + kSlack;
        return check;
    }
    if (partition->size() != topology.node_count()) {
        throw Error(ErrorCode::ModeMismatch, "partition does not cover the topology");
    }
    std::vector<std::uint64_t> per_interval(partition->parts(), 0);
    for (const Edge& e : scenario.failed) {
        if (scenario.destination && e.touches(*scenario.destination)) {
            ++per_interval[partition->part_of(e.other(*scenario.destination))];
            continue;
        }
        const std::uint32_t iu = partition->part_of(e.u);
        const std::uint32_t iv = partition->part_of(e.v);
        if (partition->successor(iu) == iv) ++per_interval[iu];
        else if (partition->successor(iv) == iu) ++per_interval[iv];
    }
    check.worst_interval_failures = *std::max_element(per_interval.begin(), per_interval.end());
    check.limit = alpha * static_cast<double>(topology.node_count()) / partition->parts();
    check.ok = static_cast<double>(check.worst_interval_failures) <= check.limit + kSlack;
    return check;
}

}  // namespace frr
