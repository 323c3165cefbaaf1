#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "animfa/analysis.hpp"
#include "animfa/csv.hpp"
#include "animfa/graph.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"
#include "animfa/rng.hpp"
#include "animfa/simulate.hpp"

namespace animfa {

using json = nlohmann::json;

/// Response for one explicitly listed ordered pair (0-based indices).
struct PairOverride {
    std::size_t i = 0;
    std::size_t j = 0;
    std::optional<ResponseSpec> breaking;
    std::optional<ResponseSpec> creation;
};

struct ResponsePlan {
    ResponseSpec breaking_within = response::Product{2, 0};
    ResponseSpec breaking_between = response::Product{1, 1};
    ResponseSpec creation_within = response::OneMinusProduct{2, 0};
    ResponseSpec creation_between = response::OneMinusProduct{1, 1};
    std::vector<PairOverride> pairs;
    TimeModulation modulation = modulation::Identity{};
};

struct InitialCondition {
    double y_default = 0.0;
    std::map<std::size_t, double> y{{0, 0.2}}; // 0-based index -> y_i(0)
    double z = 1.0;
};

struct OutputOptions {
    bool z = false;
    std::optional<double> window;
    double transient_fraction = 0.5;
};

enum class SweepParameter { balance, period };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::balance;
    std::vector<double> values;
    /// Draw fresh rates for every point from (seed, point index) instead of
    /// sharing the scenario draw.
    bool resample = false;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 0;
    TopologyKind topology = topology::Complete{2};
    ParameterDistribution distributions;
    ResponsePlan responses;
    InitialCondition initial;
    SimulationConfig simulation;
    OutputOptions outputs;
    std::optional<SweepSpec> sweep;
    std::optional<double> reference_r0;
};

// ---------------------------------------------------------------------------
// JSON schema

namespace config_detail {

/// Error with the config path prefixed.
[[noreturn]] inline void fail(const std::string& path, const std::string& what)
{
    throw Error("config " + path + ": " + what);
}

inline const json& need(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key))
        fail(path, "missing field '" + key + "'");
    return j.at(key);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path)
{
    const json& v = need(j, key, path);
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        fail(path + "." + key, e.what());
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& path)
{
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
        return fallback;
    return get<T>(j, key, path);
}

inline Argument parse_argument(const std::string& s, const std::string& path)
{
    if (s == "y_i")
        return Argument::local;
    if (s == "y_j")
        return Argument::neighbor;
    if (s == "ybar")
        return Argument::global;
    fail(path, "argument must be y_i, y_j or ybar, got '" + s + "'");
}

inline Direction parse_direction(const std::string& s, const std::string& path)
{
    if (s == "le" || s == "<=")
        return Direction::at_most;
    if (s == "gt" || s == ">")
        return Direction::above;
    fail(path, "direction must be 'le' or 'gt', got '" + s + "'");
}

inline ResponseSpec parse_response(const json& j, const std::string& path)
{
    using namespace response;
    const auto family = get<std::string>(j, "family", path);
    ResponseSpec spec;
    if (family == "constant")
        spec = Constant{get<double>(j, "value", path)};
    else if (family == "product")
        spec = Product{get_or<int>(j, "p", 1, path), get_or<int>(j, "q", 1, path)};
    else if (family == "one_minus_product")
        spec = OneMinusProduct{get_or<int>(j, "p", 1, path), get_or<int>(j, "q", 1, path)};
    else if (family == "threshold")
        spec = Threshold{parse_argument(get<std::string>(j, "argument", path), path + ".argument"),
                         get<double>(j, "a", path),
                         parse_direction(get<std::string>(j, "direction", path), path + ".direction")};
    else if (family == "smooth_threshold")
        spec = SmoothThreshold{parse_argument(get<std::string>(j, "argument", path), path + ".argument"),
                               get<double>(j, "a", path), get<int>(j, "k", path),
                               parse_direction(get_or<std::string>(j, "direction", "gt", path), path + ".direction")};
    else if (family == "scaled_product")
        spec = ScaledProduct{get<double>(j, "c", path), get_or<bool>(j, "inverse", false, path),
                             get_or<int>(j, "p", 1, path), get_or<int>(j, "q", 1, path)};
    else if (family == "local_global_blend")
        spec = LocalGlobalBlend{get<double>(j, "c", path), get_or<int>(j, "p", 1, path), get_or<int>(j, "q", 1, path),
                                get_or<int>(j, "global_exponent", 2, path)};
    else
        fail(path + ".family", "unknown response family '" + family + "'");
    try {
        validate(spec);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return spec;
}

inline TimeModulation parse_modulation(const json& j, const std::string& path)
{
    if (j.is_null())
        return modulation::Identity{};
    const auto type = get<std::string>(j, "type", path);
    TimeModulation m;
    if (type == "identity")
        m = modulation::Identity{};
    else if (type == "sine")
        m = modulation::SineSquared{get<double>(j, "period", path)};
    else if (type == "block")
        m = modulation::BlockWave{get<double>(j, "period", path)};
    else if (type == "half")
        m = modulation::ConstantHalf{};
    else
        fail(path + ".type", "unknown modulation '" + type + "'");
    try {
        validate(m);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return m;
}

inline TopologyKind parse_topology(const json& j, const std::string& path)
{
    const auto kind = get<std::string>(j, "kind", path);
    if (kind == "complete")
        return topology::Complete{get<std::size_t>(j, "n", path)};
    if (kind == "star")
        return topology::Star{get<std::size_t>(j, "n", path)};
    if (kind == "cycle")
        return topology::Cycle{get<std::size_t>(j, "n", path)};
    if (kind == "barbell")
        return topology::Barbell{get<std::size_t>(j, "n", path)};
    if (kind == "barabasi_albert")
        return topology::BarabasiAlbert{get<std::size_t>(j, "n", path), get<std::size_t>(j, "m0", path),
                                        get<std::size_t>(j, "m", path)};
    if (kind == "custom") {
        const auto rows = get<std::vector<std::vector<int>>>(j, "matrix", path);
        Mask m(rows.size(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                fail(path + ".matrix", "matrix must be square");
            for (std::size_t k = 0; k < rows.size(); ++k)
                m(i, k) = rows[i][k] != 0;
        }
        return topology::Custom{std::move(m)};
    }
    fail(path + ".kind", "unknown topology '" + kind + "'");
}

inline Distribution parse_distribution(const json& j, const std::string& path)
{
    if (j.is_number())
        return PointMass{j.get<double>()};
    if (j.is_object() && j.contains("point"))
        return PointMass{get<double>(j, "point", path)};
    if (j.is_object() && j.contains("uniform")) {
        const auto ab = get<std::vector<double>>(j, "uniform", path);
        if (ab.size() != 2 || ab[0] > ab[1])
            fail(path + ".uniform", "expected [a, b] with a <= b");
        return Uniform{ab[0], ab[1]};
    }
    fail(path, "expected a number, {\"point\": v} or {\"uniform\": [a, b]}");
}

inline std::size_t parse_index(const std::string& key, std::size_t n, const std::string& path)
{
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(key, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != key.size() || v == 0 || v > n)
        fail(path, "community index '" + key + "' must be in 1.." + std::to_string(n));
    return v - 1;
}

inline std::size_t topology_size(const TopologyKind& k)
{
    return std::visit(
        [](const auto& t) -> std::size_t {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, topology::Custom>)
                return t.mask.size();
            else
                return t.n;
        },
        k);
}

} // namespace config_detail

inline ScenarioConfig parse_scenario(const json& j)
{
    using namespace config_detail;
    ScenarioConfig c;
    if (!j.is_object())
        fail("$", "scenario must be a JSON object");
    c.name = get_or<std::string>(j, "name", "scenario", "$");
    c.seed = get<std::uint64_t>(j, "seed", "$");
    c.topology = parse_topology(need(j, "topology", "$"), "topology");
    const std::size_t n = topology_size(c.topology);

    const json& d = need(j, "distributions", "$");
    c.distributions.delta = parse_distribution(need(d, "delta", "distributions"), "distributions.delta");
    c.distributions.beta = parse_distribution(need(d, "beta", "distributions"), "distributions.beta");
    c.distributions.zeta = parse_distribution(need(d, "zeta", "distributions"), "distributions.zeta");
    c.distributions.xi = parse_distribution(need(d, "xi", "distributions"), "distributions.xi");

    const json& r = need(j, "responses", "$");
    for (const char* side : {"breaking", "creation"}) {
        const std::string base = std::string("responses.") + side;
        const json& s = need(r, side, "responses");
        auto within = parse_response(need(s, "within", base), base + ".within");
        auto between = parse_response(need(s, "between", base), base + ".between");
        if (std::string(side) == "breaking") {
            c.responses.breaking_within = within;
            c.responses.breaking_between = between;
        } else {
            c.responses.creation_within = within;
            c.responses.creation_between = between;
        }
    }
    if (r.contains("pairs")) {
        std::size_t k = 0;
        for (const auto& p : r.at("pairs")) {
            const std::string base = "responses.pairs[" + std::to_string(k++) + "]";
            PairOverride o;
            o.i = parse_index(std::to_string(get<long long>(p, "i", base)), n, base + ".i");
            o.j = parse_index(std::to_string(get<long long>(p, "j", base)), n, base + ".j");
            if (p.contains("breaking"))
                o.breaking = parse_response(p.at("breaking"), base + ".breaking");
            if (p.contains("creation"))
                o.creation = parse_response(p.at("creation"), base + ".creation");
            c.responses.pairs.push_back(std::move(o));
        }
    }
    c.responses.modulation =
        parse_modulation(r.contains("modulation") ? r.at("modulation") : json(nullptr), "responses.modulation");

    if (j.contains("initial")) {
        const json& in = j.at("initial");
        c.initial.y_default = get_or<double>(in, "y_default", 0.0, "initial");
        c.initial.z = get_or<double>(in, "z", 1.0, "initial");
        if (in.contains("y")) {
            c.initial.y.clear();
            for (const auto& [key, value] : in.at("y").items())
                c.initial.y[parse_index(key, n, "initial.y")] = value.get<double>();
        }
    }

    if (j.contains("simulation")) {
        const json& s = j.at("simulation");
        c.simulation.dt = get_or<double>(s, "dt", 0.01, "simulation");
        c.simulation.t_end = get<double>(s, "t_end", "simulation");
        const auto method = get_or<std::string>(s, "method", "euler", "simulation");
        if (method == "euler")
            c.simulation.method = Method::forward_euler;
        else if (method == "rk4")
            c.simulation.method = Method::runge_kutta4;
        else
            fail("simulation.method", "must be 'euler' or 'rk4'");
        c.simulation.clamp = get_or<bool>(s, "clamp", true, "simulation");
        c.simulation.sample_stride = get_or<std::size_t>(s, "stride", 1, "simulation");
    } else {
        fail("$", "missing field 'simulation'");
    }

    if (j.contains("outputs")) {
        const json& o = j.at("outputs");
        c.outputs.z = get_or<bool>(o, "z", false, "outputs");
        if (o.contains("window") && !o.at("window").is_null())
            c.outputs.window = get<double>(o, "window", "outputs");
        c.outputs.transient_fraction = get_or<double>(o, "transient_fraction", 0.5, "outputs");
    }
    c.simulation.record_z = c.outputs.z;

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        SweepSpec sw;
        const auto p = get<std::string>(s, "parameter", "sweep");
        if (p == "c")
            sw.parameter = SweepParameter::balance;
        else if (p == "period")
            sw.parameter = SweepParameter::period;
        else
            fail("sweep.parameter", "must be 'c' or 'period'");
        sw.values = get<std::vector<double>>(s, "values", "sweep");
        if (sw.values.empty())
            fail("sweep.values", "must not be empty");
        sw.resample = get_or<bool>(s, "resample", false, "sweep");
        c.sweep = std::move(sw);
    }
    if (j.contains("reference") && j.at("reference").contains("r0"))
        c.reference_r0 = j.at("reference").at("r0").get<double>();
    return c;
}

inline ScenarioConfig parse_scenario(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("config: not valid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Resolution and runs

struct ResolvedScenario {
    Mask support;
    ModelParameters params;
    ResponseSet responses;
    State initial;
    SimulationConfig simulation;
    double window = 0.0;
};

/// Trailing window for the steady-state estimate: the explicit setting, one
/// modulation period, or a tenth of the horizon.
inline double default_window(const ScenarioConfig& c, const TimeModulation& m)
{
    if (c.outputs.window)
        return *c.outputs.window;
    const double period = modulation_period(m);
    return period > 0.0 ? period : 0.1 * c.simulation.t_end;
}

inline ResponseSet build_responses(const ResponsePlan& plan, std::size_t n)
{
    auto set = ResponseSet::uniform(n, plan.breaking_within, plan.breaking_between, plan.creation_within,
                                    plan.creation_between, plan.modulation);
    if (plan.pairs.empty())
        return set;
    auto br = set.breaking();
    auto cr = set.creation();
    for (const auto& p : plan.pairs) {
        if (p.breaking)
            br(p.i, p.j) = *p.breaking;
        if (p.creation)
            cr(p.i, p.j) = *p.creation;
    }
    return ResponseSet(std::move(br), std::move(cr), plan.modulation);
}

inline ResolvedScenario resolve(const ScenarioConfig& c)
{
    const Mask support = [&] {
        try {
            return build_topology({c.topology, derive_seed(c.seed, stream::topology)});
        } catch (const Error& e) {
            throw Error(std::string("config ") + e.what());
        }
    }();
    ModelParameters params = [&] {
        try {
            return sample_parameters(c.distributions, support, derive_seed(c.seed, stream::parameters));
        } catch (const Error& e) {
            throw Error(std::string("config distributions: ") + e.what());
        }
    }();
    const std::size_t n = support.size();
    ResponseSet responses = build_responses(c.responses, n);

    State init(n, c.initial.y_default, c.initial.z);
    for (const auto& [i, v] : c.initial.y)
        init.y.at(i) = v;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!support(i, j))
                init.z(i, j) = 0.0;
    for (double v : init.y)
        if (!(v >= 0.0 && v <= 1.0))
            throw Error("config initial.y: values must lie in [0,1]");
    if (!(c.initial.z >= 0.0 && c.initial.z <= 1.0))
        throw Error("config initial.z: value must lie in [0,1]");

    return ResolvedScenario{support, std::move(params), std::move(responses), std::move(init), c.simulation,
                            default_window(c, c.responses.modulation)};
}

struct ScenarioOutcome {
    ResolvedScenario resolved;
    NgmResult ngm;
    EndemicCondition condition;
    Trace trace;
    Metrics metrics;
};

inline ScenarioOutcome simulate_scenario(const ScenarioConfig& c)
{
    ResolvedScenario r = resolve(c);
    NgmResult ngm = basic_reproduction_number(r.params, r.responses);
    EndemicCondition cond = endemic_existence_condition(ngm.f);
    Trace trace = integrate(r.initial, r.params, r.responses, r.simulation);
    Metrics metrics = compute_metrics(trace, r.window, c.outputs.transient_fraction);
    return ScenarioOutcome{std::move(r), std::move(ngm), cond, std::move(trace), std::move(metrics)};
}

inline json cycle_json(const std::optional<LimitCycle>& cycle)
{
    if (!cycle)
        return nullptr;
    return json{{"period", cycle->period}, {"amplitude", cycle->amplitude}, {"n_peaks", cycle->n_peaks}};
}

inline json summary_json(const ScenarioConfig& c, const ScenarioOutcome& o)
{
    json s;
    s["name"] = c.name;
    s["seed"] = c.seed;
    s["n"] = o.resolved.params.size();
    s["edges"] = undirected_edge_count(o.resolved.support);
    s["r0"] = o.ngm.r0;
    s["reference_r0"] = c.reference_r0 ? json(*c.reference_r0) : json(nullptr);
    s["endemic_condition"] = {{"min_row_sum", o.condition.min_row_sum},
                              {"min_col_sum", o.condition.min_col_sum},
                              {"holds", o.condition.holds}};
    s["metrics"] = {{"y_p", o.metrics.y_p},
                    {"ybar_inf", o.metrics.ybar_inf},
                    {"converged", o.metrics.converged},
                    {"window", o.resolved.window},
                    {"cycle", cycle_json(o.metrics.cycle)}};
    s["max_excursion"] = o.trace.max_excursion;
    s["simulation"] = {{"dt", c.simulation.dt},
                       {"t_end", c.simulation.t_end},
                       {"method", c.simulation.method == Method::forward_euler ? "euler" : "rk4"},
                       {"clamp", c.simulation.clamp},
                       {"stride", c.simulation.sample_stride}};
    return s;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os)
        throw Error("write failed for " + path.string());
}

struct RunResult {
    std::filesystem::path trace_path;
    std::filesystem::path summary_path;
    json summary;
};

/// Integrates the scenario and writes trace.csv and summary.json into `out_dir`.
inline RunResult run_scenario(const ScenarioConfig& c, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    const ScenarioOutcome o = simulate_scenario(c);
    RunResult r;
    r.trace_path = out_dir / "trace.csv";
    r.summary_path = out_dir / "summary.json";
    export_trace_csv(o.trace, r.trace_path.string());
    r.summary = summary_json(c, o);
    r.summary["trace"] = r.trace_path.filename().string();
    write_text(r.summary_path, r.summary.dump(2) + "\n");
    return r;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
    std::size_t index = 0;
    double value = 0.0;
    double r0 = 0.0;
    Metrics metrics;
};

/// Scenario for sweep point `index`: the swept parameter set to `value`.
inline ScenarioConfig sweep_point(const ScenarioConfig& c, std::size_t index, double value)
{
    if (!c.sweep)
        throw Error("config: scenario has no 'sweep' section");
    ScenarioConfig p = c;
    p.sweep.reset();
    p.simulation.record_z = false;
    if (c.sweep->parameter == SweepParameter::balance) {
        bool any = false;
        auto apply = [&](ResponseSpec& s) {
            if (has_balance(s)) {
                set_balance(s, value);
                validate(s);
                any = true;
            }
        };
        apply(p.responses.breaking_within);
        apply(p.responses.breaking_between);
        apply(p.responses.creation_within);
        apply(p.responses.creation_between);
        for (auto& o : p.responses.pairs) {
            if (o.breaking)
                apply(*o.breaking);
            if (o.creation)
                apply(*o.creation);
        }
        if (!any)
            throw Error("config sweep.parameter: no response carries a 'c' parameter");
    } else {
        set_period(p.responses.modulation, value);
    }
    if (c.sweep->resample)
        p.seed = derive_seed(c.seed, stream::sweep_base + index);
    return p;
}

inline SweepRow run_sweep_point(const ScenarioConfig& c, std::size_t index)
{
    const double value = c.sweep->values.at(index);
    const ScenarioOutcome o = simulate_scenario(sweep_point(c, index, value));
    return SweepRow{index, value, o.ngm.r0, o.metrics};
}

/// Runs every sweep point, `threads` at a time. Row k depends only on point k.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& c, unsigned threads = 0)
{
    if (!c.sweep)
        throw Error("config: scenario has no 'sweep' section");
    const std::size_t points = c.sweep->values.size();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));

    std::vector<SweepRow> rows(points);
    std::vector<std::exception_ptr> errors(points);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < points; k = next++) {
            try {
                rows[k] = run_sweep_point(c, k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os)
{
    os << "index, value, r0, y_p, ybar_inf, converged, cycle_period, cycle_amplitude\n";
    std::string line;
    for (const auto& r : rows) {
        line = std::to_string(r.index) + ", ";
        detail::append_number(line, r.value);
        for (double v : {r.r0, r.metrics.y_p, r.metrics.ybar_inf}) {
            line += ", ";
            detail::append_number(line, v);
        }
        line += r.metrics.converged ? ", 1, " : ", 0, ";
        if (r.metrics.cycle) {
            detail::append_number(line, r.metrics.cycle->period);
            line += ", ";
            detail::append_number(line, r.metrics.cycle->amplitude);
        } else {
            line += "nan, nan";
        }
        os << line << '\n';
    }
}

inline RunResult run_sweep_to(const ScenarioConfig& c, const std::filesystem::path& out_dir, unsigned threads = 0)
{
    std::filesystem::create_directories(out_dir);
    const auto rows = run_sweep(c, threads);
    RunResult r;
    r.trace_path = out_dir / "sweep.csv";
    r.summary_path = out_dir / "summary.json";
    {
        std::ostringstream os;
        write_sweep_csv(rows, os);
        write_text(r.trace_path, os.str());
    }
    json pts = json::array();
    for (const auto& row : rows)
        pts.push_back({{"index", row.index},
                       {"value", row.value},
                       {"r0", row.r0},
                       {"y_p", row.metrics.y_p},
                       {"ybar_inf", row.metrics.ybar_inf},
                       {"converged", row.metrics.converged},
                       {"cycle", cycle_json(row.metrics.cycle)}});
    r.summary = {{"name", c.name},
                 {"seed", c.seed},
                 {"parameter", c.sweep->parameter == SweepParameter::balance ? "c" : "period"},
                 {"resample", c.sweep->resample},
                 {"reference_r0", c.reference_r0 ? json(*c.reference_r0) : json(nullptr)},
                 {"points", pts},
                 {"table", r.trace_path.filename().string()}};
    write_text(r.summary_path, r.summary.dump(2) + "\n");
    return r;
}

// ---------------------------------------------------------------------------

/// Static analysis only: R0, the row/column-sum condition and, for continuous
/// responses, the equilibrium the fixed-point solver reaches.
inline json analyze_scenario(const ScenarioConfig& c)
{
    const ResolvedScenario r = resolve(c);
    const NgmResult ngm = basic_reproduction_number(r.params, r.responses);
    const EndemicCondition cond = endemic_existence_condition(ngm.f);
    json s;
    s["name"] = c.name;
    s["seed"] = c.seed;
    s["n"] = r.params.size();
    s["r0"] = ngm.r0;
    s["reference_r0"] = c.reference_r0 ? json(*c.reference_r0) : json(nullptr);
    s["endemic_condition"] = {
        {"min_row_sum", cond.min_row_sum}, {"min_col_sum", cond.min_col_sum}, {"holds", cond.holds}};
    if (!r.responses.all_continuous()) {
        s["equilibrium"] = {{"skipped", "threshold responses are discontinuous"}};
        return s;
    }
    const EquilibriumResult eq = solve_endemic_equilibrium(r.params, r.responses);
    s["equilibrium"] = {{"classification", to_string(eq.kind)},
                        {"residual", eq.residual},
                        {"iterations", eq.iterations},
                        {"y_star", eq.y_star},
                        {"global_prevalence", global_prevalence(eq.y_star)}};
    // R0 > 1 without an endemic point found: worth a closer look, not a failure.
    s["equilibrium"]["unresolved_above_threshold"] = ngm.r0 > 1.0 && eq.kind != EquilibriumKind::endemic;
    return s;
}

} // namespace animfa
