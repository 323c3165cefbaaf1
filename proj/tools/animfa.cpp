// Command-line front end: run, sweep and analyze scenarios.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "animfa/presets.hpp"
#include "animfa/scenario.hpp"

namespace {

struct Options {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<double> dt;
    std::optional<double> t_end;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Options& o, bool simulates)
{
    auto* source = cmd->add_option_group("source", "scenario to use");
    source->add_option("--config", o.config, "scenario JSON file")->check(CLI::ExistingFile);
    source->add_option("--preset", o.preset, "built-in scenario")
        ->check(CLI::IsMember(animfa::preset_names()));
    source->require_option(1);
    cmd->add_option("--seed", o.seed, "override the scenario seed");
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    if (simulates) {
        cmd->add_option("--dt", o.dt, "time step");
        cmd->add_option("--t-end", o.t_end, "final time");
    }
}

animfa::ScenarioConfig load(const Options& o)
{
    animfa::ScenarioConfig c = o.preset.empty() ? animfa::load_scenario(o.config) : animfa::load_preset(o.preset);
    if (o.seed)
        c.seed = *o.seed;
    if (o.dt)
        c.simulation.dt = *o.dt;
    if (o.t_end)
        c.simulation.t_end = *o.t_end;
    return c;
}

std::string source_name(const Options& o) { return o.preset.empty() ? o.config : "preset " + o.preset; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multigroup adaptive SIS simulator on networks of communities"};
    app.require_subcommand(0, 1);

    Options run_opts, sweep_opts, analyze_opts;
    auto* run = app.add_subcommand("run", "integrate one scenario; writes trace.csv and summary.json");
    add_common(run, run_opts, true);
    auto* sweep = app.add_subcommand("sweep", "run the scenario's sweep; writes sweep.csv and summary.json");
    add_common(sweep, sweep_opts, true);
    sweep->add_option("--threads", sweep_opts.threads, "worker threads (0 = hardware concurrency)");
    auto* analyze = app.add_subcommand("analyze", "R0, existence condition and equilibrium; no integration");
    add_common(analyze, analyze_opts, false);
    bool list = false;
    app.add_flag("--list-presets", list, "print preset names and exit");

    CLI11_PARSE(app, argc, argv);
    if (list) {
        for (const auto& p : animfa::preset_names())
            std::cout << p << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }

    const Options* active = run->parsed() ? &run_opts : sweep->parsed() ? &sweep_opts : &analyze_opts;
    try {
        const animfa::ScenarioConfig c = load(*active);
        if (run->parsed()) {
            const auto r = animfa::run_scenario(c, active->out);
            std::cout << r.summary.dump(2) << '\n';
        } else if (sweep->parsed()) {
            const auto r = animfa::run_sweep_to(c, active->out, active->threads);
            std::cout << r.summary.dump(2) << '\n';
        } else {
            const auto s = animfa::analyze_scenario(c);
            std::filesystem::create_directories(active->out);
            animfa::write_text(std::filesystem::path(active->out) / "analysis.json", s.dump(2) + "\n");
            std::cout << s.dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "animfa: " << source_name(*active) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
