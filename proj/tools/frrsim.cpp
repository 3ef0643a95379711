#include <fmt/format.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "frr/experiment.hpp"
#include "frr/rng.hpp"

namespace {

struct Overrides {
    std::optional<std::string> topology;
    std::optional<std::uint32_t> n;
    std::optional<std::uint32_t> k;
    std::optional<std::string> protocol;
    std::optional<std::string> adversary;
    std::optional<std::string> traffic;
    std::optional<double> alpha;
    std::optional<double> p;
    std::optional<double> p_start;
    std::optional<double> p_stop;
    std::optional<double> p_step;
    std::optional<std::uint32_t> repetitions;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> packing_seed;
    std::optional<std::uint32_t> hop_limit;
    std::optional<bool> count_source;
    std::optional<bool> destination_independent;
    std::optional<bool> unit_weights;
    std::optional<unsigned> threads;
    std::optional<std::uint32_t> destination;
    std::optional<std::string> output;
};

template <typename T>
void apply(frr::RunConfig& config, const char* key, const std::optional<T>& value) {
    if (!value) return;
    if constexpr (std::is_same_v<T, bool>) {
        frr::apply_setting(config, key, *value ? "true" : "false");
    } else if constexpr (std::is_same_v<T, std::string>) {
        frr::apply_setting(config, key, *value);
    } else {
        std::ostringstream s;
        s.precision(17);
        s << *value;
        frr::apply_setting(config, key, s.str());
    }
}

frr::RunConfig resolve(const std::string& config_path, const Overrides& o) {
    frr::RunConfig config;
    if (!config_path.empty()) config = frr::load_config(config_path);
    // Topology first so that `protocol = all` expands against the final kind.
    apply(config, "topology", o.topology);
    apply(config, "n", o.n);
    apply(config, "k", o.k);
    apply(config, "protocol", o.protocol);
    apply(config, "adversary", o.adversary);
    apply(config, "traffic", o.traffic);
    apply(config, "alpha", o.alpha);
    apply(config, "p", o.p);
    apply(config, "p_start", o.p_start);
    apply(config, "p_stop", o.p_stop);
    apply(config, "p_step", o.p_step);
    apply(config, "repetitions", o.repetitions);
    apply(config, "seed", o.seed);
    apply(config, "packing_seed", o.packing_seed);
    apply(config, "hop_limit", o.hop_limit);
    apply(config, "count_source", o.count_source);
    apply(config, "destination_independent", o.destination_independent);
    apply(config, "unit_weights", o.unit_weights);
    apply(config, "threads", o.threads);
    apply(config, "destination", o.destination);
    apply(config, "output", o.output);
    return config;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw frr::Error(frr::ErrorCode::Io, "cannot write " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw frr::Error(frr::ErrorCode::Io, "cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local fast-reroute simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;
    app.add_option("--config", config_path, "key = value configuration file (flags win)");
    app.add_option("--topology", o.topology, "complete | clos");
    app.add_option("--n", o.n, "complete graph size");
    app.add_option("--k", o.k, "Clos port count");
    app.add_option("--protocol", o.protocol, "comma separated protocol names, or all");
    app.add_option("--adversary", o.adversary, "none | random | destination | interval");
    app.add_option("--traffic", o.traffic, "all-to-one | gravity");
    app.add_option("--alpha", o.alpha, "failure budget fraction");
    app.add_option("--p", o.p, "single failure fraction");
    app.add_option("--p-start", o.p_start);
    app.add_option("--p-stop", o.p_stop);
    app.add_option("--p-step", o.p_step);
    app.add_option("--repetitions", o.repetitions);
    app.add_option("--seed", o.seed);
    app.add_option("--packing-seed", o.packing_seed);
    app.add_option("--hop-limit", o.hop_limit, "0 selects the protocol default");
    app.add_option("--count-source", o.count_source, "count a flow's source in its node load");
    app.add_option("--destination-independent", o.destination_independent);
    app.add_option("--unit-weights", o.unit_weights, "gravity weights forced to 1");
    app.add_option("--threads", o.threads);
    app.add_option("--destination", o.destination);
    app.add_option("--output,-o", o.output, "output file, - for stdout");

    auto* sweep = app.add_subcommand("sweep", "p-grid sweep, CSV output")->fallthrough();

    std::string scenario_path;
    std::string trace_path;
    auto* single = app.add_subcommand("single", "one run over a scenario file")->fallthrough();
    single->add_option("--scenario", scenario_path, "scenario file (`kind n k` header, `u v` lines)")->required();
    single->add_option("--trace", trace_path, "write every flow path here");

    frr::CalibrationConfig calibration;
    auto* calibrate = app.add_subcommand("calibrate", "empirical load constants as JSON")->fallthrough();
    calibrate->add_option("--seeds", calibration.seeds);
    calibrate->add_option("--sizes", calibration.sizes);
    calibrate->add_option("--interval-n", calibration.interval_n);

    auto* gen_topology = app.add_subcommand("gen-topology", "print a topology")->fallthrough();
    auto* gen_scenario = app.add_subcommand("gen-scenario", "print a failure scenario")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        frr::RunConfig config = resolve(config_path, o);
        if (sweep->parsed()) {
            write_output(config.output, frr::to_csv(frr::run_sweep(config)));
        } else if (single->parsed()) {
            const frr::ParsedScenario parsed = frr::parse_scenario(read_file(scenario_path));
            const frr::SingleResult result = frr::run_single(config, parsed);
            for (const auto& row : result.rows) {
                if (!row.budget_ok) {
                    std::cerr << fmt::format("warning: scenario exceeds the {} failure budget (alpha = {})\n",
                                             row.protocol, config.alpha);
                }
            }
            write_output(config.output, frr::to_csv(result.rows));
            if (!trace_path.empty()) write_output(trace_path, result.trace_dump);
        } else if (calibrate->parsed()) {
            calibration.base_seed = config.seed;
            calibration.threads = config.threads;
            write_output(config.output, frr::calibrate(calibration).to_json());
        } else if (gen_topology->parsed()) {
            write_output(config.output, config.build_topology().to_text());
        } else if (gen_scenario->parsed()) {
            const frr::Topology topology = config.build_topology();
            const auto endpoints = topology.endpoints();
            const frr::CellSeeds seeds = frr::cell_seeds(config.seed, 0, 0);
            const frr::NodeId d = config.destination.value_or(
                endpoints[frr::Rng(seeds.destination).below(endpoints.size())]);
            const frr::FailureScenario scenario = frr::make_scenario(config, topology, config.p_start, d, seeds.adversary);
            write_output(config.output, scenario.to_text(topology));
        }
    } catch (const frr::Error& e) {
        std::cerr << "error (" << frr::to_string(e.code()) << "): " << e.what() << '\n';
        return 2;
    }
    return 0;
}
