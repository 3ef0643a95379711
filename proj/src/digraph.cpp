#include "frr/digraph.hpp"

#include <algorithm>
#include <deque>

namespace frr {

Digraph::Digraph(const Topology& topology) : out_(topology.node_count()), in_(topology.node_count()) {
    const std::uint64_t m = topology.edge_count();
    tail_.reserve(2 * m);
    head_.reserve(2 * m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const Edge e = topology.edge_at(i);
        for (const auto& [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            const auto id = static_cast<std::uint32_t>(head_.size());
            tail_.push_back(a);
            head_.push_back(b);
            out_[a].push_back(id);
            in_[b].push_back(id);
        }
    }
    for (auto& list : out_) {
        std::sort(list.begin(), list.end(), [this](std::uint32_t x, std::uint32_t y) { return head_[x] < head_[y]; });
    }
}

std::uint32_t Digraph::arc(NodeId u, NodeId v) const {
    const auto& list = out_[u];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [this](std::uint32_t a, NodeId target) { return head_[a] < target; });
    if (it == list.end() || head_[*it] != v) throw Error(ErrorCode::InvalidParameter, "Digraph::arc: not an arc");
    return *it;
}

std::uint32_t unit_max_flow(const Digraph& g, NodeId s, NodeId t, std::uint32_t target,
                            const std::vector<char>& allowed, std::vector<char>* used) {
    const std::uint32_t n = g.node_count();
    std::vector<char> flow(g.arc_count(), 0);
    // Predecessor arc per node; backward residual steps are encoded as arc | kBack.
    constexpr std::uint32_t kBack = 0x80000000u;
    constexpr std::uint32_t kUnseen = 0xffffffffu;
    std::vector<std::uint32_t> pred(n);
    std::uint32_t value = 0;
    while (value < target) {
        std::fill(pred.begin(), pred.end(), kUnseen);
        pred[s] = 0;
        std::deque<NodeId> queue{s};
        while (!queue.empty() && pred[t] == kUnseen) {
            const NodeId v = queue.front();
            queue.pop_front();
            for (std::uint32_t a : g.out(v)) {
                const NodeId w = g.head(a);
                if (pred[w] == kUnseen && allowed[a] && !flow[a]) {
                    pred[w] = a;
                    queue.push_back(w);
                }
            }
            for (std::uint32_t a : g.in(v)) {
                const NodeId w = g.tail(a);
                if (pred[w] == kUnseen && flow[a]) {
                    pred[w] = a | kBack;
                    queue.push_back(w);
                }
            }
        }
        if (pred[t] == kUnseen) break;
        for (NodeId v = t; v != s;) {
            const std::uint32_t p = pred[v];
            const std::uint32_t a = p & ~kBack;
            if (p & kBack) {
                flow[a] = 0;
                v = g.head(a);
            } else {
                flow[a] = 1;
                v = g.tail(a);
            }
        }
        ++value;
    }
    if (used) *used = std::move(flow);
    return value;
}

}  // namespace frr
