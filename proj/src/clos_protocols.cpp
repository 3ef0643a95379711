#include "frr/clos_protocols.hpp"

#include <bit>

#include "frr/rng.hpp"

namespace frr {

namespace {

constexpr std::uint64_t kClosTag = 0xc1;

class ClosRouter final : public Router {
public:
    ClosRouter(const ClosRandomized& protocol, NodeId d) : Router(d), protocol_(&protocol) {}

    Step forward(NodeId v, PacketState& state, const LinkState& links) const override {
        const Step step = protocol_->next_hop(v, destination(), state.hop, state.inport, links);
        if (step.status == StepStatus::Forwarded) ++state.hop;
        return step;
    }

private:
    const ClosRandomized* protocol_;
};

}  // namespace

std::uint32_t floor_log2(std::uint32_t k) {
    return k == 0 ? 0 : static_cast<std::uint32_t>(std::bit_width(k)) - 1;
}

ClosPartition::ClosPartition(std::uint32_t k) : ClosPartition(k, floor_log2(k)) {}

ClosPartition::ClosPartition(std::uint32_t k, std::uint32_t intervals)
    : count_(intervals), group_(k / 2, intervals), vertical_(k, intervals) {
    if (k < 4 || k % 2 != 0) throw Error(ErrorCode::InvalidParameter, "Clos partition needs an even k >= 4");
}

std::uint32_t ClosPartition::group_interval(const NodeInfo& node) const {
    return group_.part_of(static_cast<std::uint32_t>(node.index_in_group));
}

std::uint32_t ClosPartition::vertical_interval(const NodeInfo& top) const {
    return vertical_.part_of(static_cast<std::uint32_t>(top.pod));
}

ClosRandomized::ClosRandomized(const Topology& topology, ClosScheme scheme, bool inport_keyed,
                               const ProtocolOptions& options)
    : topology_(topology), scheme_(scheme), inport_keyed_(inport_keyed), options_(options) {
    if (topology.kind() != TopologyKind::Clos) {
        throw Error(ErrorCode::IncompatibleTopology, "Clos adaptations run on Clos topologies only");
    }
    const std::uint32_t k = topology.k();
    partition_ = scheme == ClosScheme::Interval ? ClosPartition(k) : ClosPartition(k, 1);
    window_width_ = floor_log2(k);
}

ProtocolId ClosRandomized::id() const {
    if (scheme_ == ClosScheme::Interval) return inport_keyed_ ? ProtocolId::IntervalID : ProtocolId::IntervalD;
    return inport_keyed_ ? ProtocolId::ThreePID : ProtocolId::ThreePD;
}

std::unique_ptr<Router> ClosRandomized::router(NodeId destination) const {
    if (destination >= topology_.node_count() || topology_.info(destination).role != NodeRole::Bottom) {
        throw Error(ErrorCode::InvalidParameter, "Clos destinations must be bottom nodes");
    }
    return std::make_unique<ClosRouter>(*this, destination);
}

std::uint32_t ClosRandomized::default_hop_limit() const {
    const auto n = topology_.node_count();
    return 20 * static_cast<std::uint32_t>(std::bit_width(n - 1));
}

std::uint32_t ClosRandomized::window(std::uint32_t hop) const {
    if (scheme_ == ClosScheme::Interval) return 0;
    return std::min(hop / window_width_, kWindows - 1);
}

NodeId ClosRandomized::direct_target(NodeId v, NodeId d) const {
    const NodeInfo& at = topology_.info(v);
    const NodeInfo& dst = topology_.info(d);
    if (at.role == NodeRole::Top && at.pod == dst.pod) return d;
    if (at.role == NodeRole::Block) {
        return topology_.top_node(static_cast<std::uint32_t>(dst.pod), static_cast<std::uint32_t>(at.block));
    }
    return kNoNode;
}

std::vector<NodeId> ClosRandomized::candidates(NodeId v, NodeId d) const {
    const NodeInfo& at = topology_.info(v);
    const NodeInfo& dst = topology_.info(d);
    const BalancedSplit& group = partition_.group();
    const std::uint32_t K = partition_.intervals();
    std::vector<NodeId> out;
    switch (at.role) {
        case NodeRole::Bottom: {
            const std::uint32_t j = partition_.group_interval(at);
            for (std::uint32_t i = group.begin(j); i < group.end(j); ++i) {
                out.push_back(topology_.top_node(static_cast<std::uint32_t>(at.pod), i));
            }
            break;
        }
        case NodeRole::Top: {
            const std::uint32_t j = partition_.group_interval(at);
            if (at.pod == dst.pod) {
                const std::uint32_t next = (j + 1) % K;
                for (std::uint32_t i = group.begin(next); i < group.end(next); ++i) {
                    const NodeId b = topology_.bottom_node(static_cast<std::uint32_t>(at.pod), i);
                    if (b != d) out.push_back(b);
                }
            } else {
                const auto block = static_cast<std::uint32_t>(at.index_in_group);
                for (std::uint32_t i = group.begin(j); i < group.end(j); ++i) {
                    out.push_back(topology_.block_node(block, i));
                }
            }
            break;
        }
        case NodeRole::Block: {
            const BalancedSplit& vertical = partition_.vertical();
            const std::uint32_t next = (partition_.group_interval(at) + 1) % K;
            const NodeId target = direct_target(v, d);
            for (std::uint32_t p = vertical.begin(next); p < vertical.end(next); ++p) {
                const NodeId t = topology_.top_node(p, static_cast<std::uint32_t>(at.block));
                if (t != target) out.push_back(t);
            }
            break;
        }
        case NodeRole::Plain:
            break;
    }
    return out;
}

std::uint64_t ClosRandomized::store_seed(NodeId v, NodeId d, std::uint32_t window, NodeId inport) const {
    const std::uint64_t port = inport_keyed_ && inport != kLocalPort ? std::uint64_t{inport} + 1 : 0;
    return derive_seed(options_.seed, Stream::LocalPermutation, {kClosTag, v, d, window, port});
}

std::vector<NodeId> ClosRandomized::store(NodeId v, NodeId d, std::uint32_t window, NodeId inport) const {
    const std::vector<NodeId> domain = candidates(v, d);
    PermutationStream stream(store_seed(v, d, window, inport), static_cast<std::uint32_t>(domain.size()));
    std::vector<NodeId> order;
    order.reserve(domain.size());
    while (!stream.exhausted()) order.push_back(domain[stream.next()]);
    return order;
}

Step ClosRandomized::next_hop(NodeId v, NodeId d, std::uint32_t hop, NodeId inport, const LinkState& links) const {
    const NodeId direct = direct_target(v, d);
    if (direct != kNoNode && links.up(v, direct)) return Step::to(direct);
    const std::vector<NodeId> domain = candidates(v, d);
    PermutationStream stream(store_seed(v, d, window(hop), inport), static_cast<std::uint32_t>(domain.size()));
    while (!stream.exhausted()) {
        const NodeId u = domain[stream.next()];
        if (links.up(v, u)) return Step::to(u);
    }
    return Step::fail(scheme_ == ClosScheme::Interval ? StepStatus::IntervalDisconnected : StepStatus::Stranded);
}

}  // namespace frr
