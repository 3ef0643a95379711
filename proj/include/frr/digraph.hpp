#pragma once

#include <cstdint>
#include <vector>

#include "frr/topology.hpp"

namespace frr {

/// Symmetric digraph of a topology: every undirected edge {u, v} becomes the
/// arcs u->v and v->u. Arc ids are dense; out(v) lists the arcs leaving v.
class Digraph {
public:
    explicit Digraph(const Topology& topology);

    [[nodiscard]] std::uint32_t node_count() const { return static_cast<std::uint32_t>(out_.size()); }
    [[nodiscard]] std::uint32_t arc_count() const { return static_cast<std::uint32_t>(head_.size()); }
    [[nodiscard]] NodeId tail(std::uint32_t arc) const { return tail_[arc]; }
    [[nodiscard]] NodeId head(std::uint32_t arc) const { return head_[arc]; }
    [[nodiscard]] const std::vector<std::uint32_t>& out(NodeId v) const { return out_[v]; }
    [[nodiscard]] const std::vector<std::uint32_t>& in(NodeId v) const { return in_[v]; }
    /// Arc u->v; the reverse arc is arc ^ 1.
    [[nodiscard]] std::uint32_t arc(NodeId u, NodeId v) const;

private:
    std::vector<NodeId> tail_;
    std::vector<NodeId> head_;
    std::vector<std::vector<std::uint32_t>> out_;
    std::vector<std::vector<std::uint32_t>> in_;
};

/// Unit-capacity max flow from s to t over the arcs with allowed[arc] != 0,
/// stopping once `target` paths are found. Returns the flow value and marks
/// the arcs carrying flow in `used` (resized to arc_count()).
std::uint32_t unit_max_flow(const Digraph& g, NodeId s, NodeId t, std::uint32_t target,
                            const std::vector<char>& allowed, std::vector<char>* used = nullptr);

}  // namespace frr
