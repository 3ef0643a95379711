#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frr/engine.hpp"
#include "frr/failures.hpp"
#include "frr/protocol.hpp"

namespace frr {

enum class AdversaryKind { None, Random, Destination, Interval };
enum class Traffic { AllToOne, Gravity };

const char* to_string(AdversaryKind kind);
const char* to_string(Traffic traffic);
std::optional<AdversaryKind> parse_adversary(std::string_view name);
std::optional<Traffic> parse_traffic(std::string_view name);

struct RunConfig {
    TopologyKind topology = TopologyKind::Complete;
    std::uint32_t n = 64;
    std::uint32_t k = 8;
    std::vector<ProtocolId> protocols{ProtocolId::ThreeP};
    AdversaryKind adversary = AdversaryKind::Random;
    Traffic traffic = Traffic::AllToOne;
    double alpha = 0.5;
    double p_start = 0.0;
    double p_stop = 0.0;
    double p_step = 0.02;
    std::uint32_t repetitions = 1;
    std::uint64_t seed = 1;
    std::uint64_t packing_seed = 0;
    /// 0: protocol default.
    std::uint32_t hop_limit = 0;
    bool count_source = true;
    bool destination_independent = true;
    bool unit_weights = false;
    unsigned threads = 1;
    /// Fixed destination for `single`; drawn from the seed when unset.
    std::optional<NodeId> destination;
    std::string output;

    /// Throws InvalidParameter / IncompatibleTopology on inconsistent settings.
    void validate() const;
    [[nodiscard]] std::vector<double> grid() const;
    [[nodiscard]] Topology build_topology() const;
};

/// Parses `key = value` lines (blank lines and `#` comments ignored) on top of `base`.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies one `key=value` setting. Throws Parse on unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

struct CsvRow {
    std::string protocol;
    std::string topology;
    std::uint32_t n_or_k = 0;
    std::string traffic;
    double p = 0.0;
    /// Repetition index, or "mean" for aggregate rows.
    std::string repetition;
    std::uint64_t seed = 0;
    /// Empty for aggregate and all-to-all rows.
    std::string destination;
    double max_edge_load = 0.0;
    double max_node_load = 0.0;
    double hop_mean = 0.0;
    double hop_max = 0.0;
    double undelivered = 0.0;
    double interval_disconnected = 0.0;
    double loop_events = 0.0;
    bool budget_ok = true;
};

const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string to_csv(const CsvRow& row);
std::string to_csv(const std::vector<CsvRow>& rows);

/// Seeds of one sweep cell (p index, repetition).
struct CellSeeds {
    std::uint64_t cell;
    std::uint64_t adversary;
    std::uint64_t destination;
    std::uint64_t protocol;
    std::uint64_t global;
    std::uint64_t demands;
};
CellSeeds cell_seeds(std::uint64_t base, std::uint32_t p_index, std::uint32_t repetition);

/// Failure scenario of one cell towards d (destination recorded in the scenario).
FailureScenario make_scenario(const RunConfig& config, const Topology& topology, double p, NodeId d,
                              std::uint64_t adversary_seed);

/// Budget check in the protocol's own mode (per interval for Intervals, global otherwise).
BudgetCheck check_budget(const RunConfig& config, const Topology& topology, ProtocolId protocol,
                         const FailureScenario& scenario);

/// Detail rows (protocol, p, repetition order) followed by one "mean" row per (protocol, p).
std::vector<CsvRow> run_sweep(const RunConfig& config);

struct SingleResult {
    std::vector<CsvRow> rows;
    /// One line per flow: `protocol src dst status hops path...`.
    std::string trace_dump;
};

/// One run per configured protocol over a user-supplied scenario.
SingleResult run_single(const RunConfig& config, const ParsedScenario& scenario);

struct CalibrationConfig {
    std::vector<std::uint32_t> sizes{256, 4096};
    std::uint32_t seeds = 50;
    std::uint64_t base_seed = 1;
    double alpha = 0.5;
    std::uint32_t interval_n = 1024;
    double interval_alpha = 1.0 / 32.0;
    std::uint32_t interval_seeds = 50;
    unsigned threads = 1;
};

struct LoadSample {
    std::string protocol;
    std::uint32_t n = 0;
    std::vector<double> max_node_loads;
    std::vector<std::uint64_t> undelivered;
    [[nodiscard]] double median() const;
};

struct CalibrationResult {
    std::vector<LoadSample> samples;
    std::uint64_t interval_loop_events = 0;
    std::uint64_t interval_undelivered = 0;
    std::uint32_t interval_hop_max = 0;

    [[nodiscard]] const LoadSample& sample(const std::string& protocol, std::uint32_t n) const;
    [[nodiscard]] std::string to_json() const;
};

/// Destination-edge adversary failing alpha*n edges at a random destination,
/// 3-Permutations and Shared-Permutations at each size; Intervals with
/// alpha*I destination failures at interval_n.
CalibrationResult calibrate(const CalibrationConfig& config);

}  // namespace frr
