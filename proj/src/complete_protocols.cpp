#include "frr/complete_protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frr/rng.hpp"

namespace frr {

namespace {

// Tags separating the store families of different protocols within one seed.
constexpr std::uint64_t kThreePTag = 0x3b;
constexpr std::uint64_t kIntervalsTag = 0x1a;
constexpr std::uint64_t kSharedTag = 0x5c;

std::uint32_t ceil_tolerant(double x) {
    return static_cast<std::uint32_t>(std::ceil(x - 1e-9));
}

std::uint32_t ceil_log2(std::uint32_t n) {
    std::uint32_t bits = 0;
    while ((std::uint64_t{1} << bits) < n) ++bits;
    return bits;
}

void require_complete(const Topology& topology, const char* what) {
    if (topology.kind() != TopologyKind::Complete) {
        throw Error(ErrorCode::IncompatibleTopology, std::string(what) + " runs on complete graphs only");
    }
}

class ThreePermRouter final : public Router {
public:
    ThreePermRouter(const ThreePermutations& protocol, NodeId d) : Router(d), protocol_(&protocol) {}

    Step forward(NodeId v, PacketState& state, const LinkState& links) const override {
        const Step step = protocol_->next_hop(v, destination(), state.hop, links);
        if (step.status == StepStatus::Forwarded) ++state.hop;
        return step;
    }

private:
    const ThreePermutations* protocol_;
};

class IntervalsRouter final : public Router {
public:
    IntervalsRouter(const Intervals& protocol, NodeId d) : Router(d), protocol_(&protocol) {}

    Step forward(NodeId v, PacketState& state, const LinkState& links) const override {
        const Step step = protocol_->next_hop(v, destination(), links);
        if (step.status == StepStatus::Forwarded) ++state.hop;
        return step;
    }

private:
    const Intervals* protocol_;
};

class SharedPermRouter final : public Router {
public:
    SharedPermRouter(const SharedPermutations& protocol, NodeId d)
        : Router(d), protocol_(&protocol), global_(protocol.global_permutations(d)) {}

    Step forward(NodeId v, PacketState& state, const LinkState& links) const override {
        const auto decision = protocol_->next_hop(global_, v, destination(), state.hop, links);
        if (decision.step.status == StepStatus::Forwarded) state.hop = decision.hop;
        return decision.step;
    }

private:
    const SharedPermutations* protocol_;
    GlobalPermutations global_;
};

}  // namespace

ProtocolParams params_for(std::uint32_t n, double alpha, CompleteProtocol protocol, std::uint32_t c1_override) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
    if (n < 4) throw Error(ErrorCode::InvalidSize, "protocols need n >= 4");
    ProtocolParams p;
    p.n = n;
    p.alpha = alpha;
    p.log_base = std::log(static_cast<double>(n)) / std::log(1.0 / alpha);
    p.prefix_length = std::max<std::uint32_t>(1, ceil_tolerant(3.0 * p.log_base));
    switch (protocol) {
        case CompleteProtocol::ThreeP:
            p.c1 = c1_override ? c1_override : std::max<std::uint32_t>(1, ceil_tolerant(16.0 * p.log_base));
            p.e2 = p.c1 + 1;
            p.num_perms = 3;
            break;
        case CompleteProtocol::Intervals:
            p.interval_count = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::llround(4.0 * p.log_base)));
            p.interval_size = static_cast<double>(n) / p.interval_count;
            p.num_perms = 1;
            break;
        case CompleteProtocol::SharedPerm:
            p.c1 = c1_override ? c1_override : std::max<std::uint32_t>(1, ceil_tolerant(5.0 * p.log_base));
            p.c2 = std::max<std::uint32_t>(1, ceil_tolerant(5.0 * p.log_base));
            p.e2 = p.c1 + 1;
            p.num_perms = (p.c1 + 1) + (p.c2 + 2);
            break;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Stores

StoreDomain StoreDomain::range(NodeId lo, NodeId hi, NodeId skip_a, NodeId skip_b) {
    StoreDomain d;
    d.lo = lo;
    d.hi = hi;
    std::array<NodeId, 2> ex{kNoNode, kNoNode};
    std::size_t used = 0;
    for (NodeId s : {skip_a, skip_b}) {
        if (s != kNoNode && s >= lo && s < hi && (used == 0 || ex[0] != s)) ex[used++] = s;
    }
    if (used == 2 && ex[1] < ex[0]) std::swap(ex[0], ex[1]);
    d.excluded = ex;
    return d;
}

std::uint32_t StoreDomain::size() const {
    std::uint32_t s = hi - lo;
    for (NodeId e : excluded) {
        if (e != kNoNode) --s;
    }
    return s;
}

NodeId StoreDomain::at(std::uint32_t index) const {
    NodeId v = lo + index;
    for (NodeId e : excluded) {
        if (e != kNoNode && v >= e) ++v;
    }
    return v;
}

bool StoreDomain::contains(NodeId v) const {
    return v >= lo && v < hi && v != excluded[0] && v != excluded[1];
}

std::optional<NodeId> first_live_entry(NodeId owner, const StoreDomain& domain, std::uint64_t seed, NodeId skip,
                                       const LinkState& links) {
    PermutationStream stream(seed, domain.size());
    while (!stream.exhausted()) {
        const NodeId u = domain.at(stream.next());
        if (u != skip && u != owner && links.up(owner, u)) return u;
    }
    return std::nullopt;
}

TruncatedPermStore::TruncatedPermStore(NodeId owner, StoreDomain domain, std::uint64_t seed,
                                       std::uint32_t prefix_length, NodeId skip)
    : owner_(owner), domain_(domain), seed_(seed), skip_(skip) {
    PermutationStream stream(seed, domain.size());
    while (prefix_.size() < prefix_length && !stream.exhausted()) {
        const NodeId u = domain.at(stream.next());
        if (u != skip && u != owner) prefix_.push_back(u);
    }
}

std::optional<NodeId> TruncatedPermStore::first_live(const LinkState& links) const {
    for (NodeId u : prefix_) {
        if (links.up(owner_, u)) return u;
    }
    // Prefix used up: keep drawing from the same permutation without replacement.
    return first_live_entry(owner_, domain_, seed_, skip_, links);
}

// ---------------------------------------------------------------------------
// 3-Permutations

ThreePermutations::ThreePermutations(const Topology& topology, const ProtocolOptions& options)
    : topology_(topology), options_(options) {
    require_complete(topology, "3-Permutations");
    params_ = params_for(topology.node_count(), options.alpha, CompleteProtocol::ThreeP, options.c1_override);
}

std::unique_ptr<Router> ThreePermutations::router(NodeId destination) const {
    return std::make_unique<ThreePermRouter>(*this, destination);
}

std::uint32_t ThreePermutations::default_hop_limit() const {
    return std::max(4 * params_.c1, 20 * ceil_log2(params_.n));
}

std::uint32_t ThreePermutations::slot_for_hop(std::uint32_t hop, std::uint32_t c1) {
    if (hop >= 2 * c1) return 3;
    if (hop >= c1) return 2;
    return 1;
}

StoreDomain ThreePermutations::domain(NodeId v, NodeId d) const {
    return options_.destination_independent ? StoreDomain::range(0, params_.n, v)
                                            : StoreDomain::range(0, params_.n, v, d);
}

std::uint64_t ThreePermutations::store_seed(NodeId v, NodeId d, std::uint32_t slot) const {
    if (options_.destination_independent) {
        return derive_seed(options_.seed, Stream::LocalPermutation, {kThreePTag, v, slot});
    }
    return derive_seed(options_.seed, Stream::LocalPermutation, {kThreePTag, v, slot, std::uint64_t{d} + 1});
}

TruncatedPermStore ThreePermutations::store(NodeId v, NodeId d, std::uint32_t slot) const {
    const NodeId skip = options_.destination_independent ? d : kNoNode;
    return TruncatedPermStore(v, domain(v, d), store_seed(v, d, slot), params_.prefix_length, skip);
}

void ThreePermutations::pin_order(NodeId v, std::uint32_t slot, std::vector<NodeId> order) {
    const std::uint64_t key = (std::uint64_t{v} << 8) | slot;
    std::erase_if(pinned_, [key](const auto& entry) { return entry.first == key; });
    pinned_.emplace_back(key, std::move(order));
}

Step ThreePermutations::next_hop(NodeId v, NodeId d, std::uint32_t hop, const LinkState& links) const {
    if (links.up(v, d)) return Step::to(d);
    const std::uint32_t slot = slot_for_hop(hop, params_.c1);
    if (!pinned_.empty()) {
        const std::uint64_t key = (std::uint64_t{v} << 8) | slot;
        for (const auto& [k, order] : pinned_) {
            if (k != key) continue;
            for (NodeId u : order) {
                if (u != v && u != d && links.up(v, u)) return Step::to(u);
            }
            return Step::fail(StepStatus::Stranded);
        }
    }
    const NodeId skip = options_.destination_independent ? d : kNoNode;
    if (auto next = first_live_entry(v, domain(v, d), store_seed(v, d, slot), skip, links)) return Step::to(*next);
    return Step::fail(StepStatus::Stranded);
}

// ---------------------------------------------------------------------------
// Intervals

Intervals::Intervals(const Topology& topology, const ProtocolOptions& options)
    : topology_(topology), options_(options) {
    require_complete(topology, "Intervals");
    params_ = params_for(topology.node_count(), options.alpha, CompleteProtocol::Intervals);
    if (params_.interval_count > params_.n / 2) {
        throw Error(ErrorCode::TopologyTooSmall, "Intervals: interval size would drop below 2 (n = " +
                                                     std::to_string(params_.n) + ")");
    }
    partition_ = IntervalPartition(params_.n, params_.interval_count);
}

std::unique_ptr<Router> Intervals::router(NodeId destination) const {
    return std::make_unique<IntervalsRouter>(*this, destination);
}

std::uint32_t Intervals::default_hop_limit() const {
    return 20 * ceil_log2(params_.n);
}

StoreDomain Intervals::domain(NodeId v, NodeId d) const {
    const std::uint32_t next = partition_.successor(partition_.part_of(v));
    const NodeId lo = partition_.begin(next);
    const NodeId hi = partition_.end(next);
    return options_.destination_independent ? StoreDomain::range(lo, hi, v) : StoreDomain::range(lo, hi, v, d);
}

std::uint64_t Intervals::store_seed(NodeId v, NodeId d) const {
    if (options_.destination_independent) return derive_seed(options_.seed, Stream::LocalPermutation, {kIntervalsTag, v});
    return derive_seed(options_.seed, Stream::LocalPermutation, {kIntervalsTag, v, std::uint64_t{d} + 1});
}

TruncatedPermStore Intervals::store(NodeId v, NodeId d) const {
    const NodeId skip = options_.destination_independent ? d : kNoNode;
    return TruncatedPermStore(v, domain(v, d), store_seed(v, d), params_.prefix_length, skip);
}

Step Intervals::next_hop(NodeId v, NodeId d, const LinkState& links) const {
    if (links.up(v, d)) return Step::to(d);
    const NodeId skip = options_.destination_independent ? d : kNoNode;
    if (auto next = first_live_entry(v, domain(v, d), store_seed(v, d), skip, links)) return Step::to(*next);
    return Step::fail(StepStatus::IntervalDisconnected);
}

// ---------------------------------------------------------------------------
// Shared-Permutations

GlobalPermutations::GlobalPermutations(std::uint32_t n, NodeId d, std::uint32_t count, std::uint64_t global_seed) {
    std::vector<NodeId> base;
    base.reserve(n - 1);
    for (NodeId v = 0; v < n; ++v) {
        if (v != d) base.push_back(v);
    }
    orders_.reserve(count);
    positions_.reserve(count);
    for (std::uint32_t h = 0; h < count; ++h) {
        Rng rng(derive_seed(global_seed, Stream::GlobalPermutation, {d, h}));
        auto order = base;
        rng.shuffle(order);
        std::vector<std::uint32_t> pos(n, 0);
        for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
        orders_.push_back(std::move(order));
        positions_.push_back(std::move(pos));
    }
}

NodeId GlobalPermutations::successor(std::uint32_t h, NodeId v) const {
    const auto& order = orders_[h];
    return order[(positions_[h][v] + 1) % order.size()];
}

SharedPermutations::SharedPermutations(const Topology& topology, const ProtocolOptions& options)
    : topology_(topology), options_(options) {
    require_complete(topology, "Shared-Permutations");
    params_ = params_for(topology.node_count(), options.alpha, CompleteProtocol::SharedPerm, options.c1_override);
}

std::unique_ptr<Router> SharedPermutations::router(NodeId destination) const {
    return std::make_unique<SharedPermRouter>(*this, destination);
}

std::uint32_t SharedPermutations::default_hop_limit() const {
    return std::max(20 * ceil_log2(params_.n), params_.e2 + params_.c2 + 2);
}

GlobalPermutations SharedPermutations::global_permutations(NodeId d) const {
    return GlobalPermutations(params_.n, d, params_.c1 + 1, options_.global_seed);
}

std::uint64_t SharedPermutations::local_seed(NodeId v, NodeId d, std::uint32_t j) const {
    if (options_.destination_independent) return derive_seed(options_.seed, Stream::LocalPermutation, {kSharedTag, v, j});
    return derive_seed(options_.seed, Stream::LocalPermutation, {kSharedTag, v, j, std::uint64_t{d} + 1});
}

TruncatedPermStore SharedPermutations::local_store(NodeId v, NodeId d, std::uint32_t j) const {
    const bool indep = options_.destination_independent;
    const StoreDomain dom = indep ? StoreDomain::range(0, params_.n, v) : StoreDomain::range(0, params_.n, v, d);
    return TruncatedPermStore(v, dom, local_seed(v, d, j), params_.prefix_length, indep ? d : kNoNode);
}

SharedPermutations::Decision SharedPermutations::next_hop(const GlobalPermutations& global, NodeId v, NodeId d,
                                                          std::uint32_t hop, const LinkState& links) const {
    if (links.up(v, d)) return {Step::to(d), hop + 1};
    std::uint32_t h = hop;
    if (h < params_.e2) {
        const NodeId succ = global.successor(h, v);
        if (links.up(v, succ)) return {Step::to(succ), h + 1};
        h = params_.e2;
    }
    if (h > params_.e2 + params_.c2 + 1) return {Step::fail(StepStatus::HopOverflow), h};
    const bool indep = options_.destination_independent;
    const StoreDomain dom = indep ? StoreDomain::range(0, params_.n, v) : StoreDomain::range(0, params_.n, v, d);
    if (auto next = first_live_entry(v, dom, local_seed(v, d, h), indep ? d : kNoNode, links)) {
        return {Step::to(*next), h + 1};
    }
    return {Step::fail(StepStatus::Stranded), h};
}

}  // namespace frr
