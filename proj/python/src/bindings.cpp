#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "frr/experiment.hpp"

namespace py = pybind11;
using namespace frr;

namespace {

RunConfig config_from(const py::dict& settings) {
    RunConfig config;
    // Topology first so that `protocol = all` resolves against it.
    if (settings.contains("topology")) apply_setting(config, "topology", py::str(settings["topology"]));
    for (const auto& [key, value] : settings) {
        const std::string name = py::str(key);
        if (name == "topology") continue;
        std::string text = py::str(value);
        if (py::isinstance<py::bool_>(value)) text = value.cast<bool>() ? "true" : "false";
        apply_setting(config, name, text);
    }
    return config;
}

py::dict report_dict(const LoadReport& r) {
    py::dict out;
    out["max_edge_load"] = r.max_edge_load;
    out["max_node_load"] = r.max_node_load;
    out["hop_mean"] = r.hop_mean;
    out["hop_max"] = r.hop_max;
    out["flows"] = r.flows;
    out["delivered"] = r.delivered;
    out["undelivered"] = r.undelivered;
    out["interval_disconnected"] = r.interval_disconnected;
    out["loop_events"] = r.loop_events;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local fast-reroute simulator core";

    py::register_exception<Error>(m, "FrrError", PyExc_ValueError);

    py::class_<Topology>(m, "Topology")
        .def_property_readonly("kind", [](const Topology& t) { return std::string(to_string(t.kind())); })
        .def_property_readonly("node_count", &Topology::node_count)
        .def_property_readonly("edge_count", &Topology::edge_count)
        .def_property_readonly("k", &Topology::k)
        .def("endpoints", &Topology::endpoints)
        .def("neighbors", &Topology::neighbors)
        .def("to_text", &Topology::to_text);

    m.def("complete", &build_complete, py::arg("n"));
    m.def("clos", &build_clos, py::arg("k"));

    m.def("protocols", [] {
        std::vector<std::string> names;
        for (ProtocolId id : all_protocols()) names.emplace_back(to_string(id));
        return names;
    });
    m.def("csv_columns", &csv_columns);

    m.def(
        "all_to_one",
        [](const Topology& topology, const std::string& protocol, NodeId destination,
           const std::vector<std::pair<NodeId, NodeId>>& failed, std::uint64_t seed, double alpha) {
            const auto id = parse_protocol(protocol);
            if (!id) throw Error(ErrorCode::Parse, "unknown protocol " + protocol);
            FailureScenario scenario;
            for (const auto& [u, v] : failed) {
                if (!topology.adjacent(u, v)) throw Error(ErrorCode::InvalidParameter, "failed pair is not an edge");
                scenario.failed.emplace_back(u, v);
            }
            std::sort(scenario.failed.begin(), scenario.failed.end());
            scenario.failed.erase(std::unique(scenario.failed.begin(), scenario.failed.end()), scenario.failed.end());
            scenario.destination = destination;
            ProtocolOptions options;
            options.alpha = alpha;
            options.seed = seed;
            options.global_seed = seed + 1;
            const auto instance = make_protocol(*id, topology, options);
            py::gil_scoped_release release;
            const RunResult run = all_to_one(*instance, scenario, destination);
            py::gil_scoped_acquire acquire;
            return report_dict(run.report);
        },
        py::arg("topology"), py::arg("protocol"), py::arg("destination"), py::arg("failed") = std::vector<std::pair<NodeId, NodeId>>{},
        py::arg("seed") = 1, py::arg("alpha") = 0.5);

    m.def(
        "sweep",
        [](const py::dict& settings) {
            const RunConfig config = config_from(settings);
            py::gil_scoped_release release;
            return to_csv(run_sweep(config));
        },
        py::arg("settings"), "Runs a p-grid sweep and returns the CSV text.");

    m.def(
        "calibrate",
        [](const std::vector<std::uint32_t>& sizes, std::uint32_t seeds, std::uint64_t seed, std::uint32_t interval_n,
           std::uint32_t interval_seeds) {
            CalibrationConfig config;
            config.sizes = sizes;
            config.seeds = seeds;
            config.base_seed = seed;
            config.interval_n = interval_n;
            config.interval_seeds = interval_seeds;
            py::gil_scoped_release release;
            return calibrate(config).to_json();
        },
        py::arg("sizes") = std::vector<std::uint32_t>{256, 4096}, py::arg("seeds") = 50, py::arg("seed") = 1,
        py::arg("interval_n") = 1024, py::arg("interval_seeds") = 50);
}
