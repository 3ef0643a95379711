#include "frr/protocol.hpp"

#include <array>

#include "frr/arborescence.hpp"
#include "frr/clos_protocols.hpp"
#include "frr/complete_protocols.hpp"
#include "frr/disjoint_paths.hpp"

namespace frr {

namespace {

struct NameEntry {
    ProtocolId id;
    const char* name;
};

constexpr std::array<NameEntry, 11> kNames{{
    {ProtocolId::ThreeP, "threep"},
    {ProtocolId::Intervals, "intervals"},
    {ProtocolId::SharedPerm, "sharedperm"},
    {ProtocolId::ThreePD, "threep-d"},
    {ProtocolId::ThreePID, "threep-id"},
    {ProtocolId::IntervalD, "interval-d"},
    {ProtocolId::IntervalID, "interval-id"},
    {ProtocolId::ADet, "a-det"},
    {ProtocolId::APrnb, "a-prnb"},
    {ProtocolId::ACasa, "a-casa"},
    {ProtocolId::Square1, "square1"},
}};

}  // namespace

const char* to_string(ProtocolId id) {
    for (const auto& e : kNames) {
        if (e.id == id) return e.name;
    }
    return "?";
}

std::optional<ProtocolId> parse_protocol(std::string_view name) {
    for (const auto& e : kNames) {
        if (name == e.name) return e.id;
    }
    return std::nullopt;
}

std::vector<ProtocolId> all_protocols() {
    std::vector<ProtocolId> out;
    for (const auto& e : kNames) out.push_back(e.id);
    return out;
}

bool supports(ProtocolId id, TopologyKind kind) {
    switch (id) {
        case ProtocolId::ThreeP:
        case ProtocolId::Intervals:
        case ProtocolId::SharedPerm:
            return kind == TopologyKind::Complete;
        case ProtocolId::ThreePD:
        case ProtocolId::ThreePID:
        case ProtocolId::IntervalD:
        case ProtocolId::IntervalID:
            return kind == TopologyKind::Clos;
        case ProtocolId::ADet:
        case ProtocolId::APrnb:
        case ProtocolId::ACasa:
        case ProtocolId::Square1:
            return true;
    }
    return false;
}

PacketState Router::start(NodeId src) const {
    PacketState s;
    s.src = src;
    s.dst = destination_;
    return s;
}

std::unique_ptr<Protocol> make_protocol(ProtocolId id, const Topology& topology, const ProtocolOptions& options) {
    if (!supports(id, topology.kind())) {
        throw Error(ErrorCode::IncompatibleTopology,
                    std::string(to_string(id)) + " does not run on " + to_string(topology.kind()) + " topologies");
    }
    switch (id) {
        case ProtocolId::ThreeP: return std::make_unique<ThreePermutations>(topology, options);
        case ProtocolId::Intervals: return std::make_unique<Intervals>(topology, options);
        case ProtocolId::SharedPerm: return std::make_unique<SharedPermutations>(topology, options);
        case ProtocolId::ThreePD: return std::make_unique<ClosRandomized>(topology, ClosScheme::ThreeP, false, options);
        case ProtocolId::ThreePID: return std::make_unique<ClosRandomized>(topology, ClosScheme::ThreeP, true, options);
        case ProtocolId::IntervalD:
            return std::make_unique<ClosRandomized>(topology, ClosScheme::Interval, false, options);
        case ProtocolId::IntervalID:
            return std::make_unique<ClosRandomized>(topology, ClosScheme::Interval, true, options);
        case ProtocolId::ADet: return std::make_unique<ArborescenceProtocol>(topology, SwitchMode::Det, options);
        case ProtocolId::APrnb: return std::make_unique<ArborescenceProtocol>(topology, SwitchMode::Prnb, options);
        case ProtocolId::ACasa: return std::make_unique<ArborescenceProtocol>(topology, SwitchMode::Casa, options);
        case ProtocolId::Square1: return std::make_unique<Square1>(topology, options);
    }
    throw Error(ErrorCode::InvalidParameter, "unknown protocol");
}

}  // namespace frr
