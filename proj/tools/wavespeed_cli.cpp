#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavespeed/config.hpp"
#include "wavespeed/emit.hpp"
#include "wavespeed/runner.hpp"
#include "wavespeed/scenarios.hpp"
#include "wavespeed/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavespeed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnchorFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

int default_workers()
{
    if (const char* env = std::getenv("WAVESPEED_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

json estimate_to_json(const SpeedEstimate& est)
{
    json j;
    j["speed"] = est.speed;
    j["residual_rms"] = est.residual_rms;
    j["window"] = {est.t_start, est.t_end};
    j["boundary_margin"] = est.boundary_margin;
    j["flags"] = flag::to_string(est.flags);
    return j;
}

int cmd_simulate(const RunConfig& cfg)
{
    fs::create_directories(cfg.output_dir);
    RunSetup setup;
    setup.spec = cfg.model;
    setup.grid = cfg.grid;
    setup.stepper = cfg.stepper;
    setup.t_final = cfg.run.t_final;
    setup.sample_interval = cfg.run.sample_interval;
    setup.level = cfg.run.level;
    setup.snapshot_times = cfg.run.snapshot_times;
    setup.snapshot_dir = cfg.output_dir;

    const RunOutput run = simulate_front(setup);
    write_trace_csv(run.trace, (fs::path(cfg.output_dir) / "trace.csv").string());
    write_snapshot_csv(run.final_state, setup.grid,
                       (fs::path(cfg.output_dir) / "final_state.csv").string());
    std::cout << "simulated to t=" << run.final_state.t << ", " << run.trace.samples.size()
              << " front samples written to " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_speed(const RunConfig& cfg)
{
    RunSetup setup;
    setup.spec = cfg.model;
    setup.grid = cfg.grid;
    setup.stepper = cfg.stepper;
    setup.t_final = cfg.run.t_final;
    setup.sample_interval = cfg.run.sample_interval;
    setup.level = cfg.run.level;

    const bool rescalable = is_constant_field(cfg.model.d_u) && is_constant_field(cfg.model.d_v) &&
                            std::get<ConstantField>(cfg.model.d_u).value == 1.0 &&
                            std::get<ConstantField>(cfg.model.d_v).value >= 1.0;
    if (rescalable) {
        const RescaledModel rescaled = apply_appendix_rescaling(cfg.model);
        setup.spec = rescaled.spec;
        setup.rescale_factor = rescaled.speed_factor;
    }

    const RunOutput run = simulate_front(setup);
    const SpeedEstimate est = estimate_speed(run.trace, cfg.run.window_start, cfg.run.window_end,
                                             setup.rescale_factor);
    std::cout << estimate_to_json(est).dump(2) << "\n";
    if (!cfg.output_dir.empty()) {
        fs::create_directories(cfg.output_dir);
        write_trace_csv(run.trace, (fs::path(cfg.output_dir) / "trace.csv").string());
    }
    return kExitOk;
}

int cmd_sweep(RunConfig& cfg, int workers, bool full_resolution)
{
    SweepPlan plan = *cfg.plan;
    if (full_resolution) {
        plan.d.step = 0.1;
        plan.k.step = 0.1;
        std::cerr << "warning: full-resolution sweep (" << plan.k.count() << "x" << plan.d.count()
                  << " cells) takes hours\n";
    }
    fs::create_directories(cfg.output_dir);
    const std::string checkpoint = (fs::path(cfg.output_dir) / "checkpoint.json").string();
    const SweepResult result = run_sweep(plan, workers, checkpoint);

    write_speeds_csv(result, (fs::path(cfg.output_dir) / "speeds.csv").string());
    write_flags_csv(result, (fs::path(cfg.output_dir) / "flags.csv").string());
    write_metadata_json(result, (fs::path(cfg.output_dir) / "metadata.json").string());
    write_heatmap_pgm(result, (fs::path(cfg.output_dir) / "heatmap.pgm").string());
    const ContourSet contours = extract_contours(result, cfg.contour_levels);
    write_contours_json(contours, (fs::path(cfg.output_dir) / "contours.json").string());
    write_heatmap_svg(result, contours, (fs::path(cfg.output_dir) / "heatmap.svg").string());
    std::cout << "sweep finished: " << result.cells.size() << " cells in " << result.wall_seconds
              << " s, results in " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_contour(RunConfig& cfg, int workers)
{
    const std::string speeds = (fs::path(cfg.output_dir) / "speeds.csv").string();
    const std::string flags = (fs::path(cfg.output_dir) / "flags.csv").string();
    if (!fs::exists(speeds) || !fs::exists(flags))
        return cmd_sweep(cfg, workers, false);

    const SweepResult result = read_sweep_csv(speeds, flags);
    const ContourSet contours = extract_contours(result, cfg.contour_levels);
    write_contours_json(contours, (fs::path(cfg.output_dir) / "contours.json").string());
    write_heatmap_svg(result, contours, (fs::path(cfg.output_dir) / "heatmap.svg").string());
    std::cout << "contours extracted from " << speeds << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& only, double tolerance)
{
    const auto rows = run_anchor_suite(only, tolerance);
    print_anchor_table(rows, std::cout);
    if (rows.empty()) {
        std::cerr << "no anchors match filter \"" << only << "\"\n";
        return kExitConfigError;
    }
    return all_passed(rows) ? kExitOk : kExitAnchorFailure;
}

int cmd_scenario(const RunConfig& cfg)
{
    const ScenarioRequest& request = *cfg.scenario;
    const json& p = request.params;

    ScenarioConfig sc;
    sc.output_dir = cfg.output_dir;
    if (p.contains("t_final"))
        sc.t_final = p.at("t_final").get<double>();
    if (p.contains("window")) {
        sc.window_start = p.at("window")[0].get<double>();
        sc.window_end = p.at("window")[1].get<double>();
    }
    if (p.contains("dx"))
        sc.dx = p.at("dx").get<double>();
    if (p.contains("dt"))
        sc.dt = p.at("dt").get<double>();

    std::vector<ScenarioOutcome> outcomes;
    if (request.name == "periodic_resources") {
        CoefficientField mu = ConstantField{1.0};
        if (p.contains("mu"))
            mu = field_from_json(p.at("mu"), "scenario.mu");
        outcomes.push_back(scenario_periodic_resources(p.value("d", 4.0), p.value("k", 100.0), mu, sc));
    } else if (request.name == "oscillating_diffusion") {
        outcomes.push_back(scenario_oscillating_diffusion(
            p.value("k", 10.0), p.value("frequency", 0), p.value("alpha", 0.9), sc));
    } else if (request.name == "dockery") {
        CoefficientField a = SineField{1.0, 0.5, 1};
        if (p.contains("a"))
            a = field_from_json(p.at("a"), "scenario.a");
        outcomes.push_back(
            scenario_dockery_bounded(a, p.value("d", 2.0), p.value("domain_length", 10.0), sc));
    } else if (request.name == "segregated_steady_state") {
        PatchPlan patches;
        patches.patches = p.value("patches", 4);
        patches.favorable_width = p.value("favorable_width", 10.0);
        patches.gap_width = p.value("gap_width", 10.0);
        outcomes.push_back(
            scenario_segregated_steady_state(patches, p.value("k", 200.0), p.value("d", 1.0), sc));
    } else if (request.name == "cubic_sign_law") {
        outcomes.push_back(scenario_cubic_sign_law(p.value("r", 1.0), p.value("h", 1.0),
                                                   p.value("k", 2.0), p.value("d", 3.0), sc));
    } else if (request.name == "asymptotic_probes") {
        std::vector<AsymptoticProbe> probes;
        if (p.contains("probes")) {
            for (const auto& jp : p.at("probes")) {
                AsymptoticProbe probe;
                probe.k = jp.value("k", 2.0);
                probe.d = jp.value("d", 4.0);
                probe.bracket_lo = jp.value("bracket_lo", -2.0);
                probe.bracket_hi = jp.value("bracket_hi", 0.0);
                probe.scaled_by_sqrt_d = jp.value("scaled_by_sqrt_d", false);
                probes.push_back(probe);
            }
        } else {
            probes = {{2.0, 10.0, -2.0, 0.0, true},
                      {2.0, 30.0, -2.0, 0.0, true},
                      {2.0, 100.0, -2.0, 0.0, true}};
        }
        outcomes = scenario_asymptotic_probes(probes, sc);
    } else {
        throw ConfigError("unknown scenario name: " + request.name);
    }

    json report = json::array();
    for (const auto& out : outcomes) {
        json j;
        j["name"] = out.name;
        j["classification"] = to_string(out.classification);
        j["measured"] = out.measured;
        j["artifacts"] = out.artifacts;
        report.push_back(std::move(j));
    }
    std::cout << (report.size() == 1 ? report[0] : report).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"1D competition-diffusion wave-speed laboratory"};
    std::string config_path;
    std::string output_override;
    std::string only;
    int workers = default_workers();
    bool full_resolution = false;
    double tolerance = 0.0;

    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--workers", workers, "parallel workers for sweeps");
    app.add_option("--output", output_override, "override the output directory");
    app.add_option("--only", only, "anchor id filter for the validate command");
    app.add_option("--tolerance", tolerance, "override equality-anchor tolerances");
    app.add_flag("--full-resolution", full_resolution, "sweep at the 0.1 step (201x201 cells)");
    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config file " << config_path << "\n";
            return kExitConfigError;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        cfg = parse_config(buffer.str());
        if (!output_override.empty())
            cfg.output_dir = output_override;
        if (!only.empty())
            cfg.only = only;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (cfg.command == "simulate")
            return cmd_simulate(cfg);
        if (cfg.command == "speed")
            return cmd_speed(cfg);
        if (cfg.command == "sweep")
            return cmd_sweep(cfg, workers, full_resolution);
        if (cfg.command == "contour")
            return cmd_contour(cfg, workers);
        if (cfg.command == "validate")
            return cmd_validate(cfg.only, tolerance);
        if (cfg.command == "scenario")
            return cmd_scenario(cfg);
        std::cerr << "config error: unsupported command " << cfg.command << "\n";
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}
