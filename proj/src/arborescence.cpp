#include "frr/arborescence.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "frr/digraph.hpp"
#include "frr/rng.hpp"
#include "frr/structure_cache.hpp"

namespace frr {

std::uint32_t ArborescenceSet::depth(std::uint32_t tree, NodeId v) const {
    const auto& parent = parents[tree];
    std::uint32_t hops = 0;
    while (v != root) {
        v = parent[v];
        if (v == kNoNode || ++hops > parent.size()) return kNoNode;
    }
    return hops;
}

std::string ArborescenceSet::to_text() const {
    std::ostringstream out;
    const std::size_t n = parents.empty() ? 0 : parents.front().size();
    out << root << ' ' << count() << ' ' << n << '\n';
    for (std::uint32_t t = 0; t < count(); ++t) {
        for (NodeId v = 0; v < n; ++v) {
            if (v != root) out << t << ' ' << v << ' ' << parents[t][v] << '\n';
        }
    }
    return out.str();
}

ArborescenceSet parse_arborescences(const std::string& text) {
    std::istringstream in(text);
    ArborescenceSet set;
    std::uint32_t count = 0;
    std::uint32_t n = 0;
    if (!(in >> set.root >> count >> n)) throw Error(ErrorCode::Parse, "arborescences: missing `root count n` header");
    if (set.root >= n) throw Error(ErrorCode::Parse, "arborescences: root out of range");
    set.parents.assign(count, std::vector<NodeId>(n, kNoNode));
    std::uint32_t t = 0;
    NodeId v = 0;
    NodeId p = 0;
    while (in >> t >> v >> p) {
        if (t >= count || v >= n || p >= n || v == set.root) throw Error(ErrorCode::Parse, "arborescences: bad arc line");
        if (set.parents[t][v] != kNoNode) throw Error(ErrorCode::Parse, "arborescences: node with two parents");
        set.parents[t][v] = p;
    }
    if (!in.eof()) throw Error(ErrorCode::Parse, "arborescences: malformed line");
    return set;
}

Verdict verify_arborescences(const Topology& topology, const ArborescenceSet& set) {
    const std::uint32_t n = topology.node_count();
    if (set.root >= n) return {false, "root out of range"};
    std::unordered_set<std::uint64_t> arcs;
    for (std::uint32_t t = 0; t < set.count(); ++t) {
        const auto& parent = set.parents[t];
        const std::string tag = "tree " + std::to_string(t) + ": ";
        if (parent.size() != n) return {false, tag + "wrong node count"};
        if (parent[set.root] != kNoNode) return {false, tag + "root has a parent"};
        for (NodeId v = 0; v < n; ++v) {
            if (v == set.root) continue;
            if (parent[v] == kNoNode) return {false, tag + "node " + std::to_string(v) + " not spanned"};
            if (!topology.adjacent(v, parent[v])) return {false, tag + "arc " + std::to_string(v) + " is not an edge"};
            const std::uint64_t key = (std::uint64_t{v} << 32) | parent[v];
            if (!arcs.insert(key).second) {
                return {false, tag + "arc " + std::to_string(v) + "->" + std::to_string(parent[v]) + " shared"};
            }
        }
        // 0 = unknown, 1 = on the current walk, 2 = reaches the root.
        std::vector<char> state(n, 0);
        state[set.root] = 2;
        std::vector<NodeId> walk;
        for (NodeId v = 0; v < n; ++v) {
            NodeId x = v;
            walk.clear();
            while (state[x] == 0) {
                state[x] = 1;
                walk.push_back(x);
                x = parent[x];
            }
            if (state[x] == 1) return {false, tag + "cycle through node " + std::to_string(x)};
            for (NodeId w : walk) state[w] = 2;
        }
    }
    return {};
}

std::uint32_t arborescence_count(const Topology& topology) {
    return topology.kind() == TopologyKind::Clos ? topology.half_k() : topology.node_count() - 1;
}

ArborescenceSet complete_graph_arborescences(std::uint32_t n, NodeId d) {
    ArborescenceSet set;
    set.root = d;
    for (NodeId hub = 0; hub < n; ++hub) {
        if (hub == d) continue;
        std::vector<NodeId> parent(n, hub);
        parent[d] = kNoNode;
        parent[hub] = d;
        set.parents.push_back(std::move(parent));
    }
    return set;
}

namespace {

void require_connectivity(const Digraph& g, NodeId d, std::uint32_t count) {
    const std::vector<char> all(g.arc_count(), 1);
    for (NodeId w = 0; w < g.node_count(); ++w) {
        if (w == d) continue;
        if (unit_max_flow(g, w, d, count, all) < count) {
            throw Error(ErrorCode::InsufficientConnectivity,
                        "node " + std::to_string(w) + " has fewer than " + std::to_string(count) +
                            " arc-disjoint paths to " + std::to_string(d));
        }
    }
}

// Round-robin growth: each tree scans its nodes in insertion order and
// attaches one new node per round through an unused arc.
class GreedyPacking {
public:
    GreedyPacking(const Digraph& g, NodeId d, std::uint32_t count, std::uint64_t seed)
        : g_(g), d_(d), count_(count), n_(g.node_count()), rng_(derive_seed(seed, Stream::Packing, {d})),
          parent_(count, std::vector<NodeId>(n_, kNoNode)),
          in_tree_(count, std::vector<char>(n_, 0)),
          order_(count, std::vector<NodeId>{d}),
          pointer_(count, 0),
          used_(g.arc_count(), 0) {
        for (auto& flags : in_tree_) flags[d] = 1;
    }

    bool run(std::uint32_t swap_budget, PackingStats* stats) {
        std::uint64_t missing = std::uint64_t{count_} * (n_ - 1);
        while (missing > 0) {
            bool progress = false;
            for (std::uint32_t t = 0; t < count_; ++t) {
                if (order_[t].size() < n_ && grow(t)) {
                    progress = true;
                    --missing;
                }
            }
            if (progress) continue;
            if (swaps_ >= swap_budget || !repair()) break;
            ++swaps_;
            --missing;
        }
        if (stats) stats->swaps = swaps_;
        return missing == 0;
    }

    ArborescenceSet result() const { return {d_, parent_}; }

private:
    void attach(std::uint32_t t, std::uint32_t arc) {
        const NodeId u = g_.tail(arc);
        parent_[t][u] = g_.head(arc);
        in_tree_[t][u] = 1;
        order_[t].push_back(u);
        used_[arc] = 1;
    }

    bool grow(std::uint32_t t) {
        std::vector<std::uint32_t> candidates;
        while (pointer_[t] < order_[t].size()) {
            const NodeId v = order_[t][pointer_[t]];
            candidates.clear();
            for (std::uint32_t a : g_.in(v)) {
                if (!used_[a] && !in_tree_[t][g_.tail(a)]) candidates.push_back(a);
            }
            if (candidates.empty()) {
                ++pointer_[t];
                continue;
            }
            attach(t, candidates[rng_.below(candidates.size())]);
            return true;
        }
        return false;
    }

    bool descendant(std::uint32_t s, NodeId w, NodeId u) const {
        for (NodeId x = w; x != kNoNode; x = parent_[s][x]) {
            if (x == u) return true;
        }
        return false;
    }

    // Move an arc u->v owned by tree s to a stalled tree t by re-parenting u
    // in s through an unused arc that keeps s acyclic.
    bool repair() {
        for (std::uint32_t t = 0; t < count_; ++t) {
            if (order_[t].size() == n_) continue;
            for (NodeId u = 0; u < n_; ++u) {
                if (in_tree_[t][u]) continue;
                for (std::uint32_t a : g_.out(u)) {
                    const NodeId v = g_.head(a);
                    if (!used_[a] || !in_tree_[t][v]) continue;
                    std::uint32_t s = 0;
                    while (s < count_ && parent_[s][u] != v) ++s;
                    if (s == count_) continue;
                    for (std::uint32_t b : g_.out(u)) {
                        const NodeId w = g_.head(b);
                        if (used_[b] || !in_tree_[s][w] || descendant(s, w, u)) continue;
                        parent_[s][u] = w;
                        used_[b] = 1;
                        parent_[t][u] = v;
                        in_tree_[t][u] = 1;
                        order_[t].push_back(u);
                        return true;
                    }
                }
            }
        }
        return false;
    }

    const Digraph& g_;
    NodeId d_;
    std::uint32_t count_;
    std::uint32_t n_;
    Rng rng_;
    std::vector<std::vector<NodeId>> parent_;
    std::vector<std::vector<char>> in_tree_;
    std::vector<std::vector<NodeId>> order_;
    std::vector<std::size_t> pointer_;
    std::vector<char> used_;
    std::uint32_t swaps_ = 0;
};

// Lovász's constructive proof of Edmonds' theorem: grow one tree at a time,
// accepting an arc only if every node keeps (remaining - 1) arc-disjoint
// paths to d in the arcs no tree has claimed yet.
ArborescenceSet exact_packing(const Digraph& g, NodeId d, std::uint32_t count, std::uint64_t seed) {
    const std::uint32_t n = g.node_count();
    Rng rng(derive_seed(seed, Stream::Packing, {d, 1}));
    std::vector<char> allowed(g.arc_count(), 1);
    ArborescenceSet set;
    set.root = d;
    for (std::uint32_t built = 0; built < count; ++built) {
        const std::uint32_t keep = count - built - 1;
        std::vector<std::vector<char>> witness(n);
        if (keep > 0) {
            for (NodeId w = 0; w < n; ++w) {
                if (w != d) unit_max_flow(g, w, d, keep, allowed, &witness[w]);
            }
        }
        std::vector<NodeId> parent(n, kNoNode);
        std::vector<std::uint32_t> depth(n, kNoNode);
        depth[d] = 0;
        for (std::uint32_t size = 1; size < n; ++size) {
            std::vector<std::pair<std::uint64_t, std::uint32_t>> candidates;
            for (std::uint32_t a = 0; a < g.arc_count(); ++a) {
                if (allowed[a] && depth[g.head(a)] != kNoNode && depth[g.tail(a)] == kNoNode) {
                    const std::uint64_t rank = (std::uint64_t{depth[g.head(a)]} << 40) | (rng.next() >> 24);
                    candidates.emplace_back(rank, a);
                }
            }
            std::sort(candidates.begin(), candidates.end());
            bool accepted = false;
            for (const auto& [rank, a] : candidates) {
                allowed[a] = 0;
                std::vector<std::pair<NodeId, std::vector<char>>> updates;
                bool ok = true;
                for (NodeId w = 0; w < n && ok && keep > 0; ++w) {
                    if (w == d || !witness[w][a]) continue;
                    std::vector<char> flow;
                    if (unit_max_flow(g, w, d, keep, allowed, &flow) < keep) ok = false;
                    else updates.emplace_back(w, std::move(flow));
                }
                if (!ok) {
                    allowed[a] = 1;
                    continue;
                }
                for (auto& [w, flow] : updates) witness[w] = std::move(flow);
                parent[g.tail(a)] = g.head(a);
                depth[g.tail(a)] = depth[g.head(a)] + 1;
                accepted = true;
                break;
            }
            if (!accepted) throw Error(ErrorCode::PackingFailed, "exact packing found no admissible arc");
        }
        set.parents.push_back(std::move(parent));
    }
    return set;
}

void verify_or_throw(const Topology& topology, const ArborescenceSet& set) {
    const Verdict verdict = verify_arborescences(topology, set);
    if (!verdict.ok) throw Error(ErrorCode::PackingFailed, "arborescence verification failed: " + verdict.reason);
}

void check_root(const Topology& topology, NodeId d, std::uint32_t count) {
    if (d >= topology.node_count()) throw Error(ErrorCode::InvalidParameter, "root out of range");
    if (count == 0) throw Error(ErrorCode::InvalidParameter, "need at least one arborescence");
}

}  // namespace

ArborescenceSet compute_arborescences(const Topology& topology, NodeId d, std::uint32_t count, std::uint64_t seed,
                                      PackingStats* stats) {
    check_root(topology, d, count);
    const Digraph g(topology);
    GreedyPacking greedy(g, d, count, seed);
    if (greedy.run(count * topology.node_count(), stats)) {
        ArborescenceSet set = greedy.result();
        verify_or_throw(topology, set);
        return set;
    }
    require_connectivity(g, d, count);
    if (stats) stats->used_fallback = true;
    ArborescenceSet set = exact_packing(g, d, count, seed);
    verify_or_throw(topology, set);
    return set;
}

ArborescenceSet compute_arborescences_exact(const Topology& topology, NodeId d, std::uint32_t count,
                                            std::uint64_t seed) {
    check_root(topology, d, count);
    const Digraph g(topology);
    require_connectivity(g, d, count);
    ArborescenceSet set = exact_packing(g, d, count, seed);
    verify_or_throw(topology, set);
    return set;
}

// ---------------------------------------------------------------------------
// CASA switching matrix

bool prime_power(std::uint32_t q, std::uint32_t* p, std::uint32_t* m) {
    if (q < 2) return false;
    std::uint32_t f = 2;
    while (f * f <= q && q % f != 0) ++f;
    if (q % f != 0) f = q;
    std::uint32_t rest = q;
    std::uint32_t e = 0;
    while (rest % f == 0) {
        rest /= f;
        ++e;
    }
    if (rest != 1) return false;
    if (p) *p = f;
    if (m) *m = e;
    return true;
}

namespace {

// GF(p^m) elements as integers whose base-p digits are polynomial coefficients.
class GaloisField {
public:
    GaloisField(std::uint32_t p, std::uint32_t m) : p_(p), m_(m), q_(1) {
        for (std::uint32_t i = 0; i < m; ++i) q_ *= p;
        find_primitive();
    }

    [[nodiscard]] std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t out = 0;
        std::uint32_t scale = 1;
        for (std::uint32_t i = 0; i < m_; ++i) {
            out += ((a % p_ + b % p_) % p_) * scale;
            a /= p_;
            b /= p_;
            scale *= p_;
        }
        return out;
    }

    /// g^0, g^1, ..., g^{q-2} for the primitive element g = x.
    [[nodiscard]] const std::vector<std::uint32_t>& powers() const { return powers_; }

private:
    std::uint32_t times_x(std::uint32_t a, const std::vector<std::uint32_t>& f) const {
        std::vector<std::uint32_t> c(m_);
        for (std::uint32_t i = 0; i < m_; ++i) {
            c[i] = a % p_;
            a /= p_;
        }
        const std::uint32_t top = c[m_ - 1];
        std::vector<std::uint32_t> r(m_, 0);
        for (std::uint32_t i = m_ - 1; i > 0; --i) r[i] = c[i - 1];
        for (std::uint32_t i = 0; i < m_; ++i) r[i] = (r[i] + (p_ - top * f[i] % p_)) % p_;
        std::uint32_t out = 0;
        for (std::uint32_t i = m_; i-- > 0;) out = out * p_ + r[i];
        return out;
    }

    void find_primitive() {
        // Monic x^m + f_{m-1} x^{m-1} + ... + f_0; x is primitive iff its order is q - 1.
        for (std::uint32_t code = 0; code < q_; ++code) {
            std::vector<std::uint32_t> f(m_);
            std::uint32_t c = code;
            for (std::uint32_t i = 0; i < m_; ++i) {
                f[i] = c % p_;
                c /= p_;
            }
            if (f[0] == 0) continue;
            std::vector<std::uint32_t> seq{1};
            std::uint32_t x = 1;
            for (std::uint32_t t = 1; t < q_; ++t) {
                x = times_x(x, f);
                if (x == 1) break;
                seq.push_back(x);
            }
            if (seq.size() == q_ - 1 && x == 1) {
                powers_ = std::move(seq);
                return;
            }
        }
        throw Error(ErrorCode::InvalidParameter, "no primitive polynomial found");
    }

    std::uint32_t p_;
    std::uint32_t m_;
    std::uint32_t q_;
    std::vector<std::uint32_t> powers_;
};

}  // namespace

BibdMatrix::BibdMatrix(std::uint32_t order) : order_(order) {
    std::uint32_t p = 0;
    std::uint32_t m = 0;
    if (!prime_power(order, &p, &m)) {
        throw Error(ErrorCode::InvalidParameter, "CASA needs a prime-power number of arborescences, got " +
                                                     std::to_string(order) +
                                                     "; choose k so that k/2 is a prime power");
    }
    const GaloisField field(p, m);
    rows_.resize(order);
    for (std::uint32_t i = 0; i < order; ++i) {
        rows_[i].reserve(order - 1);
        for (std::uint32_t g : field.powers()) rows_[i].push_back(field.add(i, g));
    }
}

std::uint32_t next_arborescence(SwitchMode mode, std::uint32_t i, std::uint32_t count, std::uint64_t& rng_state,
                                const BibdMatrix* matrix, std::uint32_t switches) {
    if (count < 2) return i;
    switch (mode) {
        case SwitchMode::Det:
            return (i + 1) % count;
        case SwitchMode::Prnb: {
            Rng rng(rng_state);
            const auto r = static_cast<std::uint32_t>(rng.below(count - 1));
            rng_state = rng.next();
            return r < i ? r : r + 1;
        }
        case SwitchMode::Casa:
            if (!matrix || matrix->order() != count) throw Error(ErrorCode::InvalidParameter, "CASA matrix missing");
            return matrix->row(i)[switches % (count - 1)];
    }
    return i;
}

// ---------------------------------------------------------------------------
// Routing

namespace {

class ArborescenceRouter final : public Router {
public:
    ArborescenceRouter(NodeId d, std::shared_ptr<const ArborescenceSet> set, SwitchMode mode,
                       std::shared_ptr<const BibdMatrix> matrix, std::uint64_t seed)
        : Router(d), set_(std::move(set)), mode_(mode), matrix_(std::move(matrix)), seed_(seed) {}

    PacketState start(NodeId src) const override {
        PacketState s = Router::start(src);
        const std::uint32_t count = set_->count();
        std::uint32_t best = kNoNode;
        for (std::uint32_t r = 0; r < count; ++r) {
            const std::uint32_t t = (src + r) % count;
            const std::uint32_t depth = set_->depth(t, src);
            if (depth < best) {
                best = depth;
                s.tree = t;
            }
        }
        s.rng = derive_seed(seed_, Stream::Flow, {src, destination()});
        return s;
    }

    Step forward(NodeId v, PacketState& state, const LinkState& links) const override {
        const auto& parents = set_->parents;
        const std::uint32_t count = set_->count();
        if (links.up(v, parents[state.tree][v])) return advance(state, parents[state.tree][v]);
        bool any = false;
        for (std::uint32_t t = 0; t < count && !any; ++t) any = links.up(v, parents[t][v]);
        if (!any) return Step::fail(StepStatus::Stranded);
        std::uint32_t current = state.tree;
        const std::uint32_t attempts = count * count;
        for (std::uint32_t a = 0; a < attempts; ++a) {
            current = next_arborescence(mode_, current, count, state.rng, matrix_.get(), state.switches);
            ++state.switches;
            if (links.up(v, parents[current][v])) {
                state.tree = current;
                return advance(state, parents[current][v]);
            }
        }
        // The switching sequence cycled without reaching a live parent.
        for (std::uint32_t r = 1; r <= count; ++r) {
            const std::uint32_t t = (current + r) % count;
            if (links.up(v, parents[t][v])) {
                ++state.switches;
                state.tree = t;
                return advance(state, parents[t][v]);
            }
        }
        return Step::fail(StepStatus::Stranded);
    }

private:
    static Step advance(PacketState& state, NodeId next) {
        ++state.hop;
        return Step::to(next);
    }

    std::shared_ptr<const ArborescenceSet> set_;
    SwitchMode mode_;
    std::shared_ptr<const BibdMatrix> matrix_;
    std::uint64_t seed_;
};

}  // namespace

ArborescenceProtocol::ArborescenceProtocol(const Topology& topology, SwitchMode mode, const ProtocolOptions& options)
    : topology_(topology), mode_(mode), options_(options), count_(arborescence_count(topology)),
      cache_(options.cache ? options.cache : std::make_shared<StructureCache>()) {
    if (mode == SwitchMode::Casa) matrix_ = std::make_shared<BibdMatrix>(count_);
}

ProtocolId ArborescenceProtocol::id() const {
    switch (mode_) {
        case SwitchMode::Det: return ProtocolId::ADet;
        case SwitchMode::Prnb: return ProtocolId::APrnb;
        case SwitchMode::Casa: return ProtocolId::ACasa;
    }
    return ProtocolId::ADet;
}

std::shared_ptr<const ArborescenceSet> ArborescenceProtocol::arborescences(NodeId destination) const {
    return cache_->arborescences(topology_, destination, count_, options_.packing_seed);
}

std::unique_ptr<Router> ArborescenceProtocol::router(NodeId destination) const {
    if (destination >= topology_.node_count()) throw Error(ErrorCode::InvalidParameter, "destination out of range");
    return std::make_unique<ArborescenceRouter>(destination, arborescences(destination), mode_, matrix_,
                                                options_.seed);
}

std::uint32_t ArborescenceProtocol::default_hop_limit() const {
    if (topology_.kind() == TopologyKind::Clos) {
        return 12 * static_cast<std::uint32_t>(std::bit_width(topology_.k() - 1)) * count_;
    }
    return 20 * static_cast<std::uint32_t>(std::bit_width(topology_.node_count() - 1));
}

}  // namespace frr
