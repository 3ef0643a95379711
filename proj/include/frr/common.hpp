#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace frr {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Undirected edge, always stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    [[nodiscard]] std::uint64_t key() const { return (static_cast<std::uint64_t>(u) << 32) | v; }
    [[nodiscard]] bool touches(NodeId x) const { return u == x || v == x; }
    [[nodiscard]] NodeId other(NodeId x) const { return x == u ? v : u; }

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class ErrorCode {
    InvalidSize,
    InvalidParameter,
    BudgetExceeded,
    ModeMismatch,
    TopologyTooSmall,
    IncompatibleTopology,
    PackingFailed,
    InsufficientConnectivity,
    Parse,
    Io,
};

const char* to_string(ErrorCode code);

/// Outcome of a structural check.
struct Verdict {
    bool ok = true;
    std::string reason;
};

/// Configuration and construction errors. Routing anomalies are never thrown;
/// they are recorded in the flow status instead.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace frr
