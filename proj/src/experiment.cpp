#include "frr/experiment.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "frr/arborescence.hpp"
#include "frr/complete_protocols.hpp"
#include "frr/parallel.hpp"
#include "frr/rng.hpp"
#include "frr/structure_cache.hpp"

namespace frr {

const char* to_string(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::None: return "none";
        case AdversaryKind::Random: return "random";
        case AdversaryKind::Destination: return "destination";
        case AdversaryKind::Interval: return "interval";
    }
    return "?";
}

const char* to_string(Traffic traffic) {
    return traffic == Traffic::AllToOne ? "all-to-one" : "gravity";
}

std::optional<AdversaryKind> parse_adversary(std::string_view name) {
    for (auto kind : {AdversaryKind::None, AdversaryKind::Random, AdversaryKind::Destination, AdversaryKind::Interval}) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

std::optional<Traffic> parse_traffic(std::string_view name) {
    if (name == "all-to-one") return Traffic::AllToOne;
    if (name == "gravity" || name == "all-to-all") return Traffic::Gravity;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
    if (protocols.empty()) throw Error(ErrorCode::InvalidParameter, "no protocol selected");
    if (!(p_step > 0.0)) throw Error(ErrorCode::InvalidParameter, "p_step must be positive");
    if (p_stop < p_start) throw Error(ErrorCode::InvalidParameter, "p_stop must not be below p_start");
    if (p_start < 0.0 || p_stop > 1.0) throw Error(ErrorCode::InvalidParameter, "p must lie in [0, 1]");
    if (repetitions < 1) throw Error(ErrorCode::InvalidParameter, "repetitions must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
    if (adversary == AdversaryKind::Interval && topology != TopologyKind::Complete) {
        throw Error(ErrorCode::IncompatibleTopology, "the interval adversary needs a complete graph");
    }
    const Topology t = build_topology();
    for (ProtocolId id : protocols) {
        if (!supports(id, topology)) {
            throw Error(ErrorCode::IncompatibleTopology,
                        std::string(to_string(id)) + " does not run on " + frr::to_string(topology) + " topologies");
        }
        if (id == ProtocolId::ACasa && !prime_power(arborescence_count(t))) {
            throw Error(ErrorCode::InvalidParameter,
                        "a-casa needs a prime-power arborescence count, got " + std::to_string(arborescence_count(t)));
        }
    }
}

std::vector<double> RunConfig::grid() const {
    const auto steps = static_cast<std::uint32_t>(std::floor((p_stop - p_start) / p_step + 1e-9));
    std::vector<double> out;
    for (std::uint32_t i = 0; i <= steps; ++i) out.push_back(std::round((p_start + i * p_step) * 1e9) / 1e9);
    return out;
}

Topology RunConfig::build_topology() const {
    return topology == TopologyKind::Complete ? build_complete(n) : build_clos(k);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    if (!(in >> out) || !(in >> std::ws).eof()) throw Error(ErrorCode::Parse, "bad value for " + key + ": " + value);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw Error(ErrorCode::Parse, "bad boolean for " + key + ": " + value);
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "topology") {
        if (value == "complete") c.topology = TopologyKind::Complete;
        else if (value == "clos") c.topology = TopologyKind::Clos;
        else throw Error(ErrorCode::Parse, "unknown topology " + value);
    } else if (key == "n") {
        c.n = parse_number<std::uint32_t>(key, value);
    } else if (key == "k") {
        c.k = parse_number<std::uint32_t>(key, value);
    } else if (key == "protocol" || key == "protocols") {
        c.protocols.clear();
        std::istringstream in(value);
        std::string name;
        while (std::getline(in, name, ',')) {
            name = trim(name);
            if (name == "all") {
                for (ProtocolId id : all_protocols()) {
                    if (!supports(id, c.topology)) continue;
                    if (id == ProtocolId::ACasa && c.topology == TopologyKind::Complete) continue;
                    c.protocols.push_back(id);
                }
                continue;
            }
            auto id = parse_protocol(name);
            if (!id) throw Error(ErrorCode::Parse, "unknown protocol " + name);
            c.protocols.push_back(*id);
        }
    } else if (key == "adversary") {
        auto kind = parse_adversary(value);
        if (!kind) throw Error(ErrorCode::Parse, "unknown adversary " + value);
        c.adversary = *kind;
    } else if (key == "traffic") {
        auto t = parse_traffic(value);
        if (!t) throw Error(ErrorCode::Parse, "unknown traffic " + value);
        c.traffic = *t;
    } else if (key == "alpha") {
        c.alpha = parse_number<double>(key, value);
    } else if (key == "p") {
        c.p_start = c.p_stop = parse_number<double>(key, value);
    } else if (key == "p_start") {
        c.p_start = parse_number<double>(key, value);
    } else if (key == "p_stop") {
        c.p_stop = parse_number<double>(key, value);
    } else if (key == "p_step") {
        c.p_step = parse_number<double>(key, value);
    } else if (key == "repetitions") {
        c.repetitions = parse_number<std::uint32_t>(key, value);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "packing_seed") {
        c.packing_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "hop_limit") {
        c.hop_limit = parse_number<std::uint32_t>(key, value);
    } else if (key == "count_source") {
        c.count_source = parse_bool(key, value);
    } else if (key == "destination_independent") {
        c.destination_independent = parse_bool(key, value);
    } else if (key == "unit_weights") {
        c.unit_weights = parse_bool(key, value);
    } else if (key == "threads") {
        c.threads = parse_number<unsigned>(key, value);
    } else if (key == "destination") {
        c.destination = parse_number<NodeId>(key, value);
    } else if (key == "output") {
        c.output = value;
    } else {
        throw Error(ErrorCode::Parse, "unknown config key " + key);
    }
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Parse, "config line " + std::to_string(number) + ": expected key = value");
        }
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns{
        "protocol",    "topology",      "n_or_k",         "traffic",  "p",       "repetition",
        "seed",        "destination",   "max_edge_load",  "max_node_load",      "hop_mean",
        "hop_max",     "undelivered",   "interval_disconnected", "loop_events", "budget_ok"};
    return columns;
}

std::string csv_header() {
    return fmt::format("{}\n", fmt::join(csv_columns(), ","));
}

std::string to_csv(const CsvRow& r) {
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.protocol, r.topology, r.n_or_k,
                       r.traffic, r.p, r.repetition, r.seed, r.destination, r.max_edge_load, r.max_node_load,
                       r.hop_mean, r.hop_max, r.undelivered, r.interval_disconnected, r.loop_events,
                       r.budget_ok ? "true" : "false");
}

std::string to_csv(const std::vector<CsvRow>& rows) {
    std::string out = csv_header();
    for (const CsvRow& r : rows) out += to_csv(r);
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

CellSeeds cell_seeds(std::uint64_t base, std::uint32_t p_index, std::uint32_t repetition) {
    const std::uint64_t cell = derive_seed(base, Stream::Cell, {p_index, repetition});
    return {cell,
            derive_seed(cell, Stream::Adversary),
            derive_seed(cell, Stream::Destination),
            derive_seed(cell, Stream::Protocol),
            derive_seed(cell, Stream::GlobalPermutation),
            derive_seed(cell, Stream::Demands)};
}

namespace {

std::uint32_t round_half_up(double x) {
    return static_cast<std::uint32_t>(std::floor(x + 0.5));
}

IntervalPartition intervals_partition(std::uint32_t n, double alpha) {
    const ProtocolParams params = params_for(n, alpha, CompleteProtocol::Intervals);
    return IntervalPartition(n, params.interval_count);
}

ProtocolOptions protocol_options(const RunConfig& config, const CellSeeds& seeds,
                                 std::shared_ptr<StructureCache> cache) {
    ProtocolOptions o;
    o.alpha = config.alpha;
    o.seed = seeds.protocol;
    o.global_seed = seeds.global;
    o.packing_seed = config.packing_seed;
    o.destination_independent = config.destination_independent;
    o.cache = std::move(cache);
    return o;
}

EngineOptions engine_options(const RunConfig& config) {
    EngineOptions o;
    o.hop_limit = config.hop_limit;
    o.count_source = config.count_source;
    o.threads = 1;
    return o;
}

CsvRow row_from(const RunConfig& config, const Topology& topology, ProtocolId id, const LoadReport& report) {
    CsvRow row;
    row.protocol = to_string(id);
    row.topology = to_string(topology.kind());
    row.n_or_k = topology.kind() == TopologyKind::Complete ? topology.node_count() : topology.k();
    row.traffic = to_string(config.traffic);
    row.max_edge_load = report.max_edge_load;
    row.max_node_load = report.max_node_load;
    row.hop_mean = report.hop_mean;
    row.hop_max = report.hop_max;
    row.undelivered = static_cast<double>(report.undelivered);
    row.interval_disconnected = static_cast<double>(report.interval_disconnected);
    row.loop_events = static_cast<double>(report.loop_events);
    return row;
}

RunResult run_traffic(const RunConfig& config, const Protocol& protocol, const FailureScenario& scenario, NodeId d,
                      std::uint64_t demand_seed, const EngineOptions& options) {
    if (config.traffic == Traffic::AllToOne) return all_to_one(protocol, scenario, d, options);
    const DemandMatrix demands = gravity_demands(protocol.topology().endpoints(), demand_seed, config.unit_weights);
    return all_to_all(protocol, scenario, demands, options);
}

}  // namespace

FailureScenario make_scenario(const RunConfig& config, const Topology& topology, double p, NodeId d,
                              std::uint64_t adversary_seed) {
    FailureScenario s;
    switch (config.adversary) {
        case AdversaryKind::None:
            break;
        case AdversaryKind::Random:
            s = fail_random_fraction(topology, p, adversary_seed);
            break;
        case AdversaryKind::Destination: {
            const std::uint32_t count = std::min(round_half_up(p * topology.degree(d)), topology.degree(d));
            s = fail_destination_edges(topology, d, count, Seeded{adversary_seed});
            break;
        }
        case AdversaryKind::Interval: {
            const IntervalPartition partition = intervals_partition(topology.node_count(), config.alpha);
            Rng rng(derive_seed(adversary_seed, {1}));
            const auto interval = static_cast<std::uint32_t>(rng.below(partition.parts()));
            const std::uint32_t members =
                partition.part_size(interval) - (partition.part_of(d) == interval ? 1u : 0u);
            s = fail_interval_targeted(topology, d, interval, partition, std::min(round_half_up(p * members), members),
                                       Seeded{adversary_seed});
            break;
        }
    }
    s.destination = d;
    s.alpha = config.alpha;
    return s;
}

BudgetCheck check_budget(const RunConfig& config, const Topology& topology, ProtocolId protocol,
                         const FailureScenario& scenario) {
    if (protocol == ProtocolId::Intervals && topology.kind() == TopologyKind::Complete) {
        const IntervalPartition partition = intervals_partition(topology.node_count(), config.alpha);
        return validate_budget(scenario, topology, BudgetMode::PerIntervalAlphaI, config.alpha, &partition);
    }
    return validate_budget(scenario, topology, BudgetMode::GlobalAlphaN, config.alpha);
}

std::vector<CsvRow> run_sweep(const RunConfig& config) {
    config.validate();
    const Topology topology = config.build_topology();
    const std::vector<NodeId> endpoints = topology.endpoints();
    const std::vector<double> grid = config.grid();
    const auto cache = std::make_shared<StructureCache>();
    const std::size_t per_protocol = grid.size() * config.repetitions;
    std::vector<CsvRow> rows(config.protocols.size() * per_protocol);

    parallel_for(rows.size(), config.threads, [&](std::size_t job) {
        const ProtocolId id = config.protocols[job / per_protocol];
        const auto p_index = static_cast<std::uint32_t>(job % per_protocol / config.repetitions);
        const auto rep = static_cast<std::uint32_t>(job % config.repetitions);
        const CellSeeds seeds = cell_seeds(config.seed, p_index, rep);
        const NodeId d = endpoints[Rng(seeds.destination).below(endpoints.size())];
        const FailureScenario scenario = make_scenario(config, topology, grid[p_index], d, seeds.adversary);
        const auto protocol = make_protocol(id, topology, protocol_options(config, seeds, cache));
        const RunResult result = run_traffic(config, *protocol, scenario, d, seeds.demands, engine_options(config));
        CsvRow row = row_from(config, topology, id, result.report);
        row.p = grid[p_index];
        row.repetition = std::to_string(rep);
        row.seed = seeds.cell;
        if (config.traffic == Traffic::AllToOne) row.destination = std::to_string(d);
        row.budget_ok = check_budget(config, topology, id, scenario).ok;
        rows[job] = std::move(row);
    });

    std::vector<CsvRow> aggregates;
    for (std::size_t block = 0; block < config.protocols.size(); ++block) {
        for (std::size_t pi = 0; pi < grid.size(); ++pi) {
            const std::size_t first = block * per_protocol + pi * config.repetitions;
            CsvRow mean = rows[first];
            mean.repetition = "mean";
            mean.seed = config.seed;
            mean.destination.clear();
            double sums[7] = {};
            for (std::size_t r = 0; r < config.repetitions; ++r) {
                const CsvRow& x = rows[first + r];
                const double values[7] = {x.max_edge_load, x.max_node_load, x.hop_mean, x.hop_max,
                                          x.undelivered,   x.interval_disconnected, x.loop_events};
                for (int i = 0; i < 7; ++i) sums[i] += values[i];
                mean.budget_ok = mean.budget_ok && x.budget_ok;
            }
            const double reps = config.repetitions;
            mean.max_edge_load = sums[0] / reps;
            mean.max_node_load = sums[1] / reps;
            mean.hop_mean = sums[2] / reps;
            mean.hop_max = sums[3] / reps;
            mean.undelivered = sums[4] / reps;
            mean.interval_disconnected = sums[5] / reps;
            mean.loop_events = sums[6] / reps;
            aggregates.push_back(std::move(mean));
        }
    }
    rows.insert(rows.end(), aggregates.begin(), aggregates.end());
    return rows;
}

SingleResult run_single(const RunConfig& config, const ParsedScenario& parsed) {
    const Topology& topology = parsed.topology;
    RunConfig effective = config;
    effective.topology = topology.kind();
    effective.n = topology.node_count();
    if (topology.kind() == TopologyKind::Clos) effective.k = topology.k();
    effective.validate();
    const std::vector<NodeId> endpoints = topology.endpoints();
    const CellSeeds seeds = cell_seeds(config.seed, 0, 0);
    NodeId d = endpoints[Rng(seeds.destination).below(endpoints.size())];
    if (config.destination) {
        d = *config.destination;
        if (std::find(endpoints.begin(), endpoints.end(), d) == endpoints.end()) {
            throw Error(ErrorCode::InvalidParameter, "destination " + std::to_string(d) + " is not an endpoint");
        }
    }
    FailureScenario scenario = parsed.scenario;
    scenario.destination = d;
    scenario.alpha = config.alpha;
    const auto cache = std::make_shared<StructureCache>();
    EngineOptions options = engine_options(effective);
    options.keep_traces = true;
    options.threads = config.threads;

    SingleResult out;
    for (ProtocolId id : effective.protocols) {
        const auto protocol = make_protocol(id, topology, protocol_options(effective, seeds, cache));
        const RunResult result = run_traffic(effective, *protocol, scenario, d, seeds.demands, options);
        CsvRow row = row_from(effective, topology, id, result.report);
        row.p = static_cast<double>(scenario.failed.size()) / static_cast<double>(topology.edge_count());
        row.repetition = "0";
        row.seed = config.seed;
        if (effective.traffic == Traffic::AllToOne) row.destination = std::to_string(d);
        row.budget_ok = check_budget(effective, topology, id, scenario).ok;
        out.rows.push_back(std::move(row));
        for (const FlowTrace& t : result.traces) {
            out.trace_dump += fmt::format("{} {} {} {} {} {}\n", to_string(id), t.src, t.dst, to_string(t.status),
                                          t.hops(), fmt::join(t.path, " "));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Calibration

double LoadSample::median() const {
    if (max_node_loads.empty()) return 0.0;
    std::vector<double> v = max_node_loads;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

const LoadSample& CalibrationResult::sample(const std::string& protocol, std::uint32_t n) const {
    for (const LoadSample& s : samples) {
        if (s.protocol == protocol && s.n == n) return s;
    }
    throw Error(ErrorCode::InvalidParameter, "no calibration sample for " + protocol + " at n = " + std::to_string(n));
}

std::string CalibrationResult::to_json() const {
    nlohmann::ordered_json j;
    j["samples"] = nlohmann::ordered_json::array();
    for (const LoadSample& s : samples) {
        nlohmann::ordered_json e;
        e["protocol"] = s.protocol;
        e["n"] = s.n;
        e["median_max_node_load"] = s.median();
        e["max_node_loads"] = s.max_node_loads;
        e["undelivered"] = s.undelivered;
        j["samples"].push_back(std::move(e));
    }
    j["intervals"] = {{"loop_events", interval_loop_events},
                      {"undelivered", interval_undelivered},
                      {"hop_max", interval_hop_max}};
    return j.dump(2) + "\n";
}

CalibrationResult calibrate(const CalibrationConfig& config) {
    CalibrationResult result;
    const std::vector<ProtocolId> protocols{ProtocolId::ThreeP, ProtocolId::SharedPerm};
    for (std::uint32_t n : config.sizes) {
        const Topology topology = build_complete(n);
        const auto failures = static_cast<std::uint32_t>(std::floor(config.alpha * n));
        std::vector<LoadSample> samples(protocols.size());
        for (std::size_t i = 0; i < protocols.size(); ++i) {
            samples[i].protocol = to_string(protocols[i]);
            samples[i].n = n;
            samples[i].max_node_loads.resize(config.seeds);
            samples[i].undelivered.resize(config.seeds);
        }
        parallel_for(std::size_t{config.seeds} * protocols.size(), config.threads, [&](std::size_t job) {
            const auto s = static_cast<std::uint32_t>(job / protocols.size());
            const std::size_t which = job % protocols.size();
            const std::uint64_t cell = derive_seed(config.base_seed, Stream::Cell, {n, s});
            const auto d = static_cast<NodeId>(Rng(derive_seed(cell, Stream::Destination)).below(n));
            FailureScenario scenario =
                fail_destination_edges(topology, d, failures, Seeded{derive_seed(cell, Stream::Adversary)});
            ProtocolOptions options;
            options.alpha = config.alpha;
            options.seed = derive_seed(cell, Stream::Protocol);
            options.global_seed = derive_seed(cell, Stream::GlobalPermutation);
            const auto protocol = make_protocol(protocols[which], topology, options);
            const RunResult run = all_to_one(*protocol, scenario, d);
            samples[which].max_node_loads[s] = run.report.max_node_load;
            samples[which].undelivered[s] = run.report.undelivered;
        });
        for (auto& s : samples) result.samples.push_back(std::move(s));
    }

    const Topology topology = build_complete(config.interval_n);
    const IntervalPartition partition = intervals_partition(config.interval_n, config.interval_alpha);
    const auto budget = static_cast<std::uint32_t>(
        std::floor(config.interval_alpha * config.interval_n / partition.parts() + 1e-9));
    std::vector<LoadReport> reports(config.interval_seeds);
    parallel_for(config.interval_seeds, config.threads, [&](std::size_t s) {
        const std::uint64_t cell = derive_seed(config.base_seed, Stream::Cell, {config.interval_n, s, 1});
        const auto d = static_cast<NodeId>(Rng(derive_seed(cell, Stream::Destination)).below(config.interval_n));
        FailureScenario scenario =
            fail_destination_edges(topology, d, budget, Seeded{derive_seed(cell, Stream::Adversary)});
        ProtocolOptions options;
        options.alpha = config.interval_alpha;
        options.seed = derive_seed(cell, Stream::Protocol);
        const auto protocol = make_protocol(ProtocolId::Intervals, topology, options);
        reports[s] = all_to_one(*protocol, scenario, d).report;
    });
    for (const LoadReport& r : reports) {
        result.interval_loop_events += r.loop_events;
        result.interval_undelivered += r.undelivered;
        result.interval_hop_max = std::max(result.interval_hop_max, r.hop_max);
    }
    return result;
}

}  // namespace frr
