#include <doctest.h>

#include <json.hpp>
#include <set>
#include <sstream>

#include "frr/experiment.hpp"

using namespace frr;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

RunConfig small_clos() {
    RunConfig c;
    c.topology = TopologyKind::Clos;
    c.k = 8;
    c.protocols = {ProtocolId::ThreePID, ProtocolId::ADet, ProtocolId::Square1};
    c.p_start = 0.0;
    c.p_stop = 0.1;
    c.p_step = 0.05;
    c.repetitions = 3;
    c.seed = 11;
    return c;
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(
        "# sweep\n"
        "topology = clos\n"
        "k = 16\n"
        "protocols = all   # every Clos protocol\n"
        "adversary = random\n"
        "traffic = gravity\n"
        "p_start = 0\n"
        "p_stop = 0.2\n"
        "p_step = 0.02\n"
        "repetitions = 40\n"
        "seed = 9\n"
        "count_source = false\n");
    CHECK(c.topology == TopologyKind::Clos);
    CHECK(c.k == 16);
    CHECK(c.protocols.size() == 8);
    CHECK(c.traffic == Traffic::Gravity);
    CHECK(c.repetitions == 40);
    CHECK_FALSE(c.count_source);
    const auto grid = c.grid();
    REQUIRE(grid.size() == 11);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 0.2);
    CHECK(grid[3] == 0.06);
    CHECK_NOTHROW(c.validate());

    RunConfig complete = parse_config("topology = complete\nprotocol = all\n");
    CHECK(complete.protocols.size() == 6);

    CHECK_THROWS_AS(parse_config("bogus = 1\n"), Error);
    CHECK_THROWS_AS(parse_config("n = ten\n"), Error);
    CHECK_THROWS_AS(parse_config("no equals sign\n"), Error);
    CHECK_THROWS_AS(parse_config("protocol = nope\n"), Error);
}

TEST_CASE("config validation") {
    RunConfig c;
    c.n = 64;
    c.protocols = {ProtocolId::ACasa};
    CHECK_THROWS_AS(c.validate(), Error);
    c.protocols = {ProtocolId::ThreePD};
    CHECK_THROWS_AS(c.validate(), Error);
    c.topology = TopologyKind::Clos;
    c.adversary = AdversaryKind::Interval;
    CHECK_THROWS_AS(c.validate(), Error);
    c.adversary = AdversaryKind::Random;
    c.p_stop = 1.5;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("csv schema") {
    const std::string header = csv_header();
    CHECK(header ==
          "protocol,topology,n_or_k,traffic,p,repetition,seed,destination,max_edge_load,max_node_load,hop_mean,"
          "hop_max,undelivered,interval_disconnected,loop_events,budget_ok\n");
    CsvRow r;
    r.protocol = "a-det";
    r.topology = "clos";
    r.n_or_k = 16;
    r.traffic = "all-to-one";
    r.p = 0.06;
    r.repetition = "mean";
    r.seed = 5;
    r.max_edge_load = 3.5;
    r.hop_mean = 3.75;
    CHECK(to_csv(r) == "a-det,clos,16,all-to-one,0.06,mean,5,,3.5,0,3.75,0,0,0,0,true\n");
}

TEST_CASE("cell seeds are distinct across cells and streams") {
    std::set<std::uint64_t> seen;
    for (std::uint32_t p = 0; p < 11; ++p) {
        for (std::uint32_t r = 0; r < 40; ++r) {
            const CellSeeds s = cell_seeds(1, p, r);
            for (std::uint64_t x : {s.cell, s.adversary, s.destination, s.protocol, s.global, s.demands}) {
                CHECK(seen.insert(x).second);
            }
        }
    }
}

TEST_CASE("scenarios per adversary") {
    RunConfig c;
    c.n = 1024;
    c.alpha = 1.0 / 32;
    const Topology t = c.build_topology();
    c.adversary = AdversaryKind::Destination;
    const auto dest = make_scenario(c, t, 0.5, 100, 3);
    CHECK(dest.failed.size() == 512);
    CHECK(dest.destination == 100);
    c.adversary = AdversaryKind::Interval;
    const auto iv = make_scenario(c, t, 1.0, 100, 3);
    CHECK((iv.failed.size() == 128 || iv.failed.size() == 127));
    for (const Edge& e : iv.failed) CHECK(e.touches(100));
    c.adversary = AdversaryKind::None;
    CHECK(make_scenario(c, t, 0.5, 100, 3).failed.empty());
    c.adversary = AdversaryKind::Random;
    CHECK(make_scenario(c, t, 0.001, 100, 3).failed.size() == 524);

    c.adversary = AdversaryKind::Destination;
    const auto four = make_scenario(c, t, 4.0 / 1023, 100, 3);
    CHECK(check_budget(c, t, ProtocolId::Intervals, four).ok);
    const auto many = make_scenario(c, t, 0.1, 100, 3);
    CHECK_FALSE(check_budget(c, t, ProtocolId::ThreeP, many).ok);
}

TEST_CASE("sweep rows and aggregates") {
    const RunConfig c = small_clos();
    const auto rows = run_sweep(c);
    const std::size_t detail = 3 * 3 * 3;
    REQUIRE(rows.size() == detail + 3 * 3);
    CHECK(rows[0].protocol == "threep-id");
    CHECK(rows[0].repetition == "0");
    CHECK(rows[detail].repetition == "mean");
    CHECK(rows[detail].destination.empty());
    double sum = 0.0;
    for (int r = 0; r < 3; ++r) sum += rows[r].max_edge_load;
    CHECK(rows[detail].max_edge_load == doctest::Approx(sum / 3));
    for (std::size_t i = 0; i < detail; ++i) {
        if (rows[i].p == 0.0) {
            CHECK(rows[i].undelivered == 0.0);
            CHECK(rows[i].hop_max == 4.0);
        }
    }
}

TEST_CASE("sweep output is byte identical across thread counts") {
    RunConfig c = small_clos();
    c.threads = 1;
    const std::string one = to_csv(run_sweep(c));
    c.threads = 6;
    const std::string many = to_csv(run_sweep(c));
    CHECK(one == many);
    c.seed = 12;
    CHECK(to_csv(run_sweep(c)) != one);

    RunConfig g = small_clos();
    g.traffic = Traffic::Gravity;
    g.repetitions = 1;
    g.p_stop = 0.05;
    const auto rows = run_sweep(g);
    CHECK(rows[0].destination.empty());
    CHECK(rows[0].traffic == "gravity");
    g.threads = 4;
    CHECK(to_csv(run_sweep(g)) == to_csv(rows));
}

TEST_CASE("single run on a supplied scenario") {
    const Topology t = build_complete(5);
    ParsedScenario parsed = parse_scenario("complete 5 0\n0 1\n");
    RunConfig c;
    c.protocols = {ProtocolId::ThreeP, ProtocolId::Square1};
    c.destination = 0;
    const SingleResult r = run_single(c, parsed);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].p == doctest::Approx(0.1));
    CHECK(r.rows[0].destination == "0");
    std::istringstream dump(r.trace_dump);
    std::string line;
    int lines = 0;
    while (std::getline(dump, line)) {
        const auto fields = split(line, ' ');
        REQUIRE(fields.size() >= 6);
        CHECK(fields[2] == "0");
        CHECK(fields[3] == "delivered");
        ++lines;
    }
    CHECK(lines == 8);
    c.destination = 7;
    CHECK_THROWS_AS(run_single(c, parsed), Error);
}

TEST_CASE("calibration output") {
    CalibrationConfig cfg;
    cfg.sizes = {64};
    cfg.seeds = 4;
    cfg.interval_n = 1024;
    cfg.interval_seeds = 2;
    cfg.threads = 2;
    const CalibrationResult result = calibrate(cfg);
    const auto& s = result.sample("threep", 64);
    CHECK(s.max_node_loads.size() == 4);
    for (auto u : s.undelivered) CHECK(u == 0);
    CHECK(result.interval_loop_events == 0);
    const auto json = nlohmann::json::parse(result.to_json());
    CHECK(json["samples"].size() == 2);
    CHECK(json["samples"][0]["protocol"] == "threep");
    CHECK_THROWS_AS(static_cast<void>(result.sample("intervals", 64)), Error);

    LoadSample odd{"x", 1, {3, 1, 2}, {}};
    CHECK(odd.median() == 2.0);
    LoadSample even{"x", 1, {4, 1, 2, 3}, {}};
    CHECK(even.median() == 2.5);
}
