#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "animfa/presets.hpp"

using namespace animfa;
using Catch::Matchers::ContainsSubstring;

namespace {

json minimal()
{
    return json::parse(R"({
      "seed": 3,
      "topology": {"kind": "complete", "n": 3},
      "distributions": {"delta": 1, "beta": {"uniform": [0, 1]}, "zeta": 1, "xi": {"point": 0.5}},
      "responses": {
        "breaking": {"within": {"family": "product", "p": 2, "q": 0},
                     "between": {"family": "product", "p": 1, "q": 1}},
        "creation": {"within": {"family": "one_minus_product", "p": 2, "q": 0},
                     "between": {"family": "one_minus_product", "p": 1, "q": 1}}
      },
      "simulation": {"t_end": 20}
    })");
}

std::string csv_of(const ScenarioConfig& c)
{
    std::ostringstream os;
    write_trace_csv(simulate_scenario(c).trace, os);
    return os.str();
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

ScenarioConfig shortened(ScenarioConfig c, double t_end, double window)
{
    c.simulation.t_end = t_end;
    c.outputs.window = window;
    return c;
}

} // namespace

TEST_CASE("shipped presets parse and resolve", "[scenario]")
{
    const std::vector<std::string> expected = {"case1",       "case2-sine", "case2-block",  "case2-barbell",
                                               "case2-star",  "case3",      "case4-within", "case4-between"};
    auto names = preset_names();
    std::sort(names.begin(), names.end());
    auto sorted = expected;
    std::sort(sorted.begin(), sorted.end());
    CHECK(names == sorted);

    for (const auto& name : expected) {
        const auto c = load_preset(name);
        CHECK(c.name == name);
        const auto r = resolve(c);
        CHECK(r.params.size() >= 2);
        CHECK(c.sweep.has_value() == (name != "case1"));
    }
    CHECK_THROWS_WITH(load_preset("case9"), ContainsSubstring("unknown preset"));
}

TEST_CASE("minimal config defaults", "[scenario]")
{
    const auto c = parse_scenario(minimal());
    CHECK(c.name == "scenario");
    CHECK(c.simulation.dt == 0.01);
    CHECK(c.simulation.method == Method::forward_euler);
    CHECK(std::holds_alternative<modulation::Identity>(c.responses.modulation));
    const auto r = resolve(c);
    CHECK(r.initial.y[0] == 0.2);
    CHECK(r.initial.y[1] == 0.0);
    CHECK(r.window == 2.0);
    CHECK(r.params.xi()(0, 1) == 0.5);
}

TEST_CASE("config errors name the offending field", "[scenario][errors]")
{
    auto broken = [](auto edit) {
        json j = minimal();
        edit(j);
        return j;
    };
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) { j.erase("seed"); })),
                      ContainsSubstring("missing field 'seed'"));
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) { j["topology"]["kind"] = "lattice"; })),
                      ContainsSubstring("topology.kind"));
    CHECK_THROWS_WITH(
        parse_scenario(broken([](json& j) { j["responses"]["breaking"]["within"]["family"] = "quadratic"; })),
        ContainsSubstring("responses.breaking.within"));
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) {
                          j["responses"]["creation"]["between"] = {
                              {"family", "threshold"}, {"argument", "y_i"}, {"a", 1.5}, {"direction", "le"}};
                      })),
                      ContainsSubstring("responses.creation.between"));
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) { j["responses"]["modulation"] = {{"type", "square"}}; })),
                      ContainsSubstring("responses.modulation"));
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) { j["initial"] = {{"y", {{"4", 0.1}}}}; })),
                      ContainsSubstring("initial.y"));
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) { j["simulation"]["method"] = "leapfrog"; })),
                      ContainsSubstring("simulation.method"));
    CHECK_THROWS_WITH(parse_scenario(broken([](json& j) { j["distributions"]["beta"] = "wide"; })),
                      ContainsSubstring("distributions.beta"));
    CHECK_THROWS_WITH(parse_scenario(std::string("{ not json")), ContainsSubstring("not valid JSON"));

    // Errors that only surface when the scenario is resolved.
    CHECK_THROWS_WITH(resolve(parse_scenario(broken([](json& j) { j["topology"] = {{"kind", "barbell"}, {"n", 5}}; }))),
                      ContainsSubstring("config topology"));
    CHECK_THROWS_WITH(
        resolve(parse_scenario(broken([](json& j) { j["distributions"]["delta"] = {{"uniform", {0, 0}}}; }))),
        ContainsSubstring("config distributions"));
    CHECK_THROWS_WITH(resolve(parse_scenario(broken([](json& j) { j["initial"] = {{"z", 2}}; }))),
                      ContainsSubstring("initial.z"));

    CHECK_THROWS_WITH(load_scenario("/nonexistent/scenario.json"), ContainsSubstring("cannot open"));
}

TEST_CASE("runs are byte-for-byte reproducible", "[scenario]")
{
    const auto c = shortened(load_preset("case1"), 200.0, 20.0);
    CHECK(csv_of(c) == csv_of(c));

    auto other = c;
    other.seed += 1;
    CHECK(csv_of(c) != csv_of(other));
}

TEST_CASE("run writes the trace and a summary", "[scenario]")
{
    const auto dir = std::filesystem::temp_directory_path() / "animfa_test_run";
    std::filesystem::remove_all(dir);
    const auto c = shortened(load_preset("case1"), 100.0, 10.0);
    const auto r = run_scenario(c, dir);
    REQUIRE(std::filesystem::exists(r.trace_path));
    const auto summary = json::parse(slurp(r.summary_path));
    CHECK(summary["name"] == "case1");
    CHECK(summary["n"] == 2);
    CHECK(summary["trace"] == "trace.csv");
    CHECK(summary["metrics"]["y_p"].get<double>() >= 0.2);
    const std::string csv = slurp(r.trace_path);
    CHECK(csv.rfind("t, y_1, y_2, ybar, z_1_1, z_1_2, z_2_1, z_2_2\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep points", "[scenario]")
{
    const auto c3 = load_preset("case3");
    const auto p = sweep_point(c3, 6, 4.0);
    CHECK(std::get<response::ScaledProduct>(p.responses.breaking_within).c == 4.0);
    CHECK(std::get<response::ScaledProduct>(p.responses.breaking_between).c == 4.0);
    CHECK(p.seed == c3.seed);
    CHECK_FALSE(p.sweep.has_value());

    const auto c2 = load_preset("case2-block");
    const auto q = sweep_point(c2, 0, 2.0);
    CHECK(modulation_period(q.responses.modulation) == 2.0);
    CHECK(resolve(q).window == 2.0);

    auto no_c = c2;
    no_c.sweep->parameter = SweepParameter::balance;
    CHECK_THROWS_WITH(sweep_point(no_c, 0, 1.0), ContainsSubstring("'c'"));

    auto fresh = c3;
    fresh.sweep->resample = true;
    CHECK(sweep_point(fresh, 0, 1.0).seed != sweep_point(fresh, 1, 1.0).seed);
    CHECK(sweep_point(fresh, 2, 1.0).seed == sweep_point(fresh, 2, 8.0).seed);
}

TEST_CASE("sweep output does not depend on the thread count", "[scenario]")
{
    auto c = shortened(load_preset("case3"), 40.0, 10.0);
    c.sweep->values = {0.25, 1.0, 4.0, 16.0};
    std::ostringstream one, three;
    write_sweep_csv(run_sweep(c, 1), one);
    write_sweep_csv(run_sweep(c, 3), three);
    CHECK(one.str() == three.str());
    CHECK(one.str().rfind("index, value, r0, y_p, ybar_inf, converged, cycle_period, cycle_amplitude\n", 0) == 0);
}

TEST_CASE("analysis summary", "[scenario]")
{
    const json a = analyze_scenario(load_preset("case3"));
    CHECK(a["r0"].get<double>() > 1.0);
    CHECK(a["equilibrium"]["classification"] == "Endemic");
    CHECK(a["equilibrium"]["residual"].get<double>() < 1e-9);

    const json t = analyze_scenario(load_preset("case1"));
    CHECK(t["equilibrium"].contains("skipped"));
    CHECK(t["r0"].get<double>() > 1.0);
}
