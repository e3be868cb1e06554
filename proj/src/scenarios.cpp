#include "wavespeed/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "wavespeed/runner.hpp"
#include "wavespeed/stepper.hpp"
#include "wavespeed/sweep.hpp"

namespace wavespeed {

const char* to_string(Classification c)
{
    switch (c) {
    case Classification::UInvades: return "UInvades";
    case Classification::VInvades: return "VInvades";
    case Classification::Pinned: return "Pinned";
    case Classification::Coexistence: return "Coexistence";
    case Classification::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

double trapezoid_mass(const std::vector<double>& f, double dx)
{
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i)
        sum += f[i];
    return sum * dx;
}

double overlap_mass(const State& s, double dx)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
        sum += std::min(s.u[i], s.v[i]) * dx;
    return sum;
}

double sup_norm(const std::vector<double>& f)
{
    double m = 0.0;
    for (double x : f)
        m = std::max(m, std::abs(x));
    return m;
}

void finalize(ScenarioOutcome& out, const ScenarioConfig& cfg, const FrontTrace* trace)
{
    if (cfg.output_dir.empty())
        return;
    std::filesystem::create_directories(cfg.output_dir);
    if (trace) {
        const auto path = (std::filesystem::path(cfg.output_dir) / (out.name + "_trace.csv")).string();
        write_trace_csv(*trace, path);
        out.artifacts.push_back(path);
    }
    const auto path = (std::filesystem::path(cfg.output_dir) / (out.name + ".json")).string();
    write_outcome_json(out, path);
    out.artifacts.push_back(path);
}

Classification classify_by_speed(const SpeedEstimate& est, double tol)
{
    if (est.flags & flag::NoCrossing)
        return Classification::Inconclusive;
    if (est.speed < -tol)
        return Classification::VInvades;
    if (est.speed > tol)
        return Classification::UInvades;
    return Classification::Pinned;
}

}  // namespace

ScenarioOutcome scenario_periodic_resources(double d, double k, const CoefficientField& mu,
                                            const ScenarioConfig& cfg)
{
    if (field_min(mu) < 0.0)
        throw std::invalid_argument("resource distribution mu must be nonnegative");

    ScenarioOutcome out;
    out.name = "periodic_resources";

    RunSetup setup;
    setup.spec = ModelSpec::symmetric_lv(k, d);
    setup.spec.mu = mu;
    setup.stepper = StepperConfig{suggested_dt(setup.spec, cfg.dt)};
    setup.t_final = cfg.t_final;

    const double period = std::holds_alternative<PeriodicField>(mu)
                              ? std::get<PeriodicField>(mu).period
                              : 1.0;
    SpeedOptions opts;
    opts.pinned_speed_tol = cfg.pinned_speed_tol;

    // Fast fronts can leave the default domain before the window opens;
    // doubling (domain lengths stay multiples of the resource period) keeps
    // the interface measurable.
    double length = 40.0;
    unsigned guard = 0;
    RunOutput run;
    SpeedEstimate est;
    for (;;) {
        setup.grid = Grid1D::make(length, cfg.dx);
        run = simulate_front(setup);
        std::size_t in_window = 0;
        for (const auto& s : run.trace.samples)
            if (s.first >= cfg.window_start - 1e-12 && s.first <= cfg.window_end + 1e-12)
                ++in_window;
        if (in_window < 5) {
            if (length < 160.0) {
                length *= 2.0;
                guard |= flag::BoundaryTooClose;
                continue;
            }
            est = SpeedEstimate{};
            est.speed = std::numeric_limits<double>::quiet_NaN();
            est.flags = flag::NoCrossing | guard;
            break;
        }
        est = estimate_pulsating_speed(run.trace, period, cfg.window_start, cfg.window_end, 1.0,
                                       opts);
        if (est.boundary_margin < 2.0 && length < 160.0) {
            length *= 2.0;
            guard |= flag::BoundaryTooClose;
            continue;
        }
        est.flags |= guard;
        break;
    }

    const double overlap = overlap_mass(run.final_state, setup.grid.dx);
    out.measured["speed"] = est.speed;
    out.measured["residual_rms"] = est.residual_rms;
    out.measured["wobble"] = est.wobble;
    out.measured["overlap_mass"] = overlap;
    out.measured["u_sup"] = sup_norm(run.final_state.u);
    out.measured["v_sup"] = sup_norm(run.final_state.v);

    if (overlap > 0.05 * setup.grid.length)
        out.classification = Classification::Inconclusive;  // front dissolved
    else if (est.pinned)
        out.classification = Classification::Pinned;
    else
        out.classification = classify_by_speed(est, cfg.pinned_speed_tol);

    finalize(out, cfg, &run.trace);
    return out;
}

ScenarioOutcome scenario_oscillating_diffusion(double k, int frequency, double alpha,
                                               const ScenarioConfig& cfg)
{
    ScenarioOutcome out;
    out.name = "oscillating_diffusion";

    RunSetup setup;
    setup.spec = ModelSpec::symmetric_lv(k, 1.0);
    setup.spec.alpha = alpha;
    if (frequency > 0)
        setup.spec.d_v = SineField{1.0, 0.75, frequency};
    const double dx = frequency > 0 ? std::min(cfg.dx, 1.0 / (20.0 * frequency)) : cfg.dx;
    setup.grid = Grid1D::make(40.0, 40.0 / std::lround(40.0 / dx));
    setup.stepper = StepperConfig{suggested_dt(setup.spec, cfg.dt)};
    setup.t_final = cfg.t_final;

    const RunOutput run = simulate_front(setup);
    const double period = frequency > 0 ? 1.0 / frequency : 1.0;
    SpeedOptions opts;
    opts.pinned_speed_tol = cfg.pinned_speed_tol;
    const SpeedEstimate est =
        estimate_pulsating_speed(run.trace, period, cfg.window_start, cfg.window_end, 1.0, opts);

    out.measured["speed"] = est.speed;
    out.measured["residual_rms"] = est.residual_rms;
    out.measured["wobble"] = est.wobble;
    // Reversal relative to the alpha-advantage baseline: with alpha < 1 and
    // uniform diffusion v chases u (speed < 0); speed > 0 means the uniform
    // diffuser u prevails despite its competition handicap.
    out.measured["reversal"] = (alpha < 1.0 && est.speed > cfg.pinned_speed_tol) ? 1.0 : 0.0;
    out.classification = classify_by_speed(est, cfg.pinned_speed_tol);

    finalize(out, cfg, &run.trace);
    return out;
}

ScenarioOutcome scenario_dockery_bounded(const CoefficientField& a, double d, double domain_length,
                                         const ScenarioConfig& cfg)
{
    if (is_constant_field(a))
        throw std::invalid_argument("the bounded-domain scenario requires a non-constant growth field");

    ScenarioOutcome out;
    out.name = "dockery_bounded";

    ModelSpec spec;
    spec.d_v = ConstantField{d};
    spec.h = 1.0;
    spec.k = 1.0;
    spec.a = a;
    const Grid1D grid = Grid1D::make(domain_length, std::min(cfg.dx, domain_length / 128.0));
    const StepperConfig sc{suggested_dt(spec, cfg.dt)};
    Stepper stepper(spec, grid, sc);

    State state;
    state.u.assign(grid.n, 0.5);
    state.v.assign(grid.n, 0.5);

    const double t_max = std::max(cfg.t_final, 3000.0);
    const long steps_per_check = std::lround(10.0 / sc.dt);
    double residual = std::numeric_limits<double>::infinity();
    while (state.t < t_max - 1e-9) {
        State before = state;
        for (long i = 0; i < steps_per_check && state.t < t_max - 1e-9; ++i)
            stepper.advance(state);
        residual = 0.0;
        for (int i = 0; i < grid.n; ++i)
            residual = std::max(residual, std::max(std::abs(state.u[i] - before.u[i]),
                                                   std::abs(state.v[i] - before.v[i])));
        residual /= (state.t - before.t);
        if (sup_norm(state.u) < cfg.loser_supnorm || sup_norm(state.v) < cfg.loser_supnorm)
            break;
    }

    const double u_sup = sup_norm(state.u);
    const double v_sup = sup_norm(state.v);
    out.measured["u_sup"] = u_sup;
    out.measured["v_sup"] = v_sup;
    out.measured["final_time"] = state.t;
    out.measured["residual"] = residual;

    if (v_sup < cfg.loser_supnorm)
        out.classification = Classification::UInvades;
    else if (u_sup < cfg.loser_supnorm)
        out.classification = Classification::VInvades;
    else if (residual < 1e-6)
        out.classification = Classification::Coexistence;
    else
        out.classification = Classification::Inconclusive;

    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        const auto snap = (std::filesystem::path(cfg.output_dir) / (out.name + "_final.csv")).string();
        write_snapshot_csv(state, grid, snap);
        out.artifacts.push_back(snap);
    }
    finalize(out, cfg, nullptr);
    return out;
}

namespace {

// Favorable patch on [0, width], neutral gap up to the period, with linear
// ramps one mesh cell wide at the transitions.
PeriodicField patchy_resources(double favorable_width, double period, double dx)
{
    const int nodes = static_cast<int>(std::lround(period / dx));
    PeriodicField mu;
    mu.period = period;
    mu.values.resize(nodes + 1);
    for (int i = 0; i <= nodes; ++i) {
        const double x = i * dx;
        double value;
        if (x <= favorable_width - dx)
            value = 1.0;
        else if (x <= favorable_width)
            value = (favorable_width - x) / dx;
        else if (x <= period - dx)
            value = 0.0;
        else
            value = 1.0 - (period - x) / dx;
        mu.values[i] = value;
    }
    return mu;
}

}  // namespace

ScenarioOutcome scenario_segregated_steady_state(const PatchPlan& plan, double k, double d,
                                                 const ScenarioConfig& cfg)
{
    ScenarioOutcome out;
    out.name = "segregated_steady_state";

    if (plan.patches < 2) {
        out.classification = Classification::Inconclusive;
        out.measured["patches"] = plan.patches;
        finalize(out, cfg, nullptr);
        return out;
    }

    const double period = plan.favorable_width + plan.gap_width;
    const double length = plan.patches * period;
    const double dx = std::min(cfg.dx * 2.5, plan.favorable_width / 32.0);
    const Grid1D grid = Grid1D::make(length, length / std::lround(length / dx));

    ModelSpec spec = ModelSpec::symmetric_lv(k, d);
    spec.mu = patchy_resources(plan.favorable_width, period, grid.dx);
    const StepperConfig sc{suggested_dt(spec, cfg.dt)};
    Stepper stepper(spec, grid, sc);

    // u in odd-numbered favorable patches, v in even-numbered ones.
    State state;
    state.u.assign(grid.n, 0.0);
    state.v.assign(grid.n, 0.0);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        const int patch = static_cast<int>(x / period);
        const double local = x - patch * period;
        if (local <= plan.favorable_width) {
            if (patch % 2 == 0)
                state.u[i] = 1.0;
            else
                state.v[i] = 1.0;
        }
    }

    const double t_settle = std::max(cfg.t_final, 400.0);
    const long steps_per_check = std::lround(5.0 / sc.dt);
    double residual = std::numeric_limits<double>::infinity();
    State previous = state;
    while (state.t < t_settle - 1e-9) {
        previous = state;
        stepper.advance(state);
        residual = 0.0;
        for (int i = 0; i < grid.n; ++i)
            residual = std::max(residual, std::max(std::abs(state.u[i] - previous.u[i]),
                                                   std::abs(state.v[i] - previous.v[i])));
        residual /= sc.dt;
        if (residual < 1e-4 && state.t > 50.0)
            break;
        for (long i = 1; i < steps_per_check && state.t < t_settle - 1e-9; ++i)
            stepper.advance(state);
    }
    out.measured["residual"] = residual;
    out.measured["settle_time"] = state.t;

    // Overlap counted only inside favorable patches: the reaction-free gaps
    // always hold both species' diffusive tails, segregated or not.
    double overlap = 0.0;
    double favorable_length = 0.0;
    for (int i = 0; i < grid.n; ++i)
        if (evaluate_coefficient(spec.mu, grid.x(i)) >= 0.5) {
            overlap += std::min(state.u[i], state.v[i]) * grid.dx;
            favorable_length += grid.dx;
        }
    out.measured["overlap_mass"] = overlap;
    out.measured["u_sup"] = sup_norm(state.u);
    out.measured["v_sup"] = sup_norm(state.v);

    if (sup_norm(state.u) < 0.5 || sup_norm(state.v) < 0.5) {
        out.classification = Classification::Inconclusive;  // pattern collapsed
        out.measured["collapse_time"] = state.t;
        finalize(out, cfg, nullptr);
        return out;
    }
    if (overlap > 0.05 * favorable_length) {
        out.classification = Classification::Coexistence;  // not segregated
        finalize(out, cfg, nullptr);
        return out;
    }

    // Stability probe: +/-5% perturbation must decay back.
    const State baseline = state;
    for (int i = 0; i < grid.n; ++i) {
        state.u[i] *= 1.05;
        state.v[i] *= 0.95;
    }
    double drift0 = 0.0;
    for (int i = 0; i < grid.n; ++i)
        drift0 = std::max(drift0, std::max(std::abs(state.u[i] - baseline.u[i]),
                                           std::abs(state.v[i] - baseline.v[i])));
    const long recovery_steps = std::lround(50.0 / sc.dt);
    for (long i = 0; i < recovery_steps; ++i)
        stepper.advance(state);
    double drift1 = 0.0;
    for (int i = 0; i < grid.n; ++i)
        drift1 = std::max(drift1, std::max(std::abs(state.u[i] - baseline.u[i]),
                                           std::abs(state.v[i] - baseline.v[i])));
    out.measured["perturbation_initial"] = drift0;
    out.measured["perturbation_final"] = drift1;

    out.classification = (residual < 1e-4 && drift1 < 0.5 * drift0) ? Classification::Pinned
                                                                    : Classification::Inconclusive;

    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        const auto snap =
            (std::filesystem::path(cfg.output_dir) / (out.name + "_final.csv")).string();
        write_snapshot_csv(state, grid, snap);
        out.artifacts.push_back(snap);
    }
    finalize(out, cfg, nullptr);
    return out;
}

SpeedEstimate measure_bistable_speed(const ModelSpec& spec, const ScenarioConfig& cfg)
{
    const double d = std::get<ConstantField>(spec.d_v).value;
    RunSetup setup;
    if (d >= 1.0) {
        const RescaledModel rescaled = apply_appendix_rescaling(spec);
        setup.spec = rescaled.spec;
        setup.rescale_factor = rescaled.speed_factor;
    } else {
        setup.spec = spec;
    }
    setup.stepper = StepperConfig{suggested_dt(setup.spec, cfg.dt), d >= 1.0};
    setup.t_final = cfg.t_final;

    double length = 40.0;
    unsigned guard = 0;
    for (;;) {
        setup.grid = Grid1D::make(length, cfg.dx);
        const RunOutput run = simulate_front(setup);
        std::size_t in_window = 0;
        for (const auto& s : run.trace.samples)
            if (s.first >= cfg.window_start - 1e-12 && s.first <= cfg.window_end + 1e-12)
                ++in_window;
        if (in_window < 5) {
            if (length < 160.0) {
                length *= 2.0;
                guard |= flag::BoundaryTooClose;
                continue;
            }
            SpeedEstimate est;
            est.speed = std::numeric_limits<double>::quiet_NaN();
            est.flags = flag::NoCrossing | guard;
            return est;
        }
        SpeedEstimate est = estimate_speed(run.trace, cfg.window_start, cfg.window_end,
                                           setup.rescale_factor);
        if (est.boundary_margin < 2.0 && length < 160.0) {
            length *= 2.0;
            guard |= flag::BoundaryTooClose;
            continue;
        }
        est.flags |= guard;
        return est;
    }
}

ScenarioOutcome scenario_cubic_sign_law(double r, double h, double k, double d,
                                        const ScenarioConfig& cfg)
{
    ScenarioOutcome out;
    out.name = "cubic_sign_law";

    ModelSpec spec;
    spec.kind = CompetitionKind::Cubic;
    spec.r = r;
    spec.h = h;
    spec.k = k;
    spec.d_v = ConstantField{d};
    spec.validate();

    ScenarioConfig fine = cfg;
    fine.dt = std::min(cfg.dt, 0.005);

    const SpeedEstimate est = measure_bistable_speed(spec, fine);
    ModelSpec other = spec;
    const double d2 = 2.0 * d;
    other.d_v = ConstantField{d2};
    const SpeedEstimate est2 = measure_bistable_speed(other, fine);

    out.measured["speed"] = est.speed;
    out.measured["speed_second_d"] = est2.speed;
    out.measured["second_d"] = d2;
    out.measured["k_minus_rh"] = k - r * h;
    const auto sgn = [tol = cfg.pinned_speed_tol](double c) {
        return (c > tol) ? 1.0 : (c < -tol ? -1.0 : 0.0);
    };
    out.measured["sign_agrees_across_d"] = (sgn(est.speed) == sgn(est2.speed)) ? 1.0 : 0.0;
    out.classification = classify_by_speed(est, cfg.pinned_speed_tol);

    finalize(out, cfg, nullptr);
    return out;
}

std::vector<ScenarioOutcome> scenario_asymptotic_probes(const std::vector<AsymptoticProbe>& probes,
                                                        const ScenarioConfig& cfg)
{
    std::vector<ScenarioOutcome> outcomes;
    outcomes.reserve(probes.size());
    for (const auto& probe : probes) {
        ScenarioOutcome out;
        char name[80];
        std::snprintf(name, sizeof(name), "asymptotic_k%g_d%g", probe.k, probe.d);
        out.name = name;

        const ModelSpec spec = ModelSpec::symmetric_lv(probe.k, probe.d);
        const SpeedEstimate est = measure_bistable_speed(spec, cfg);

        const double scaled =
            probe.scaled_by_sqrt_d ? est.speed / std::sqrt(probe.d) : est.speed;
        out.measured["speed"] = est.speed;
        out.measured["scaled_speed"] = scaled;
        out.measured["bracket_lo"] = probe.bracket_lo;
        out.measured["bracket_hi"] = probe.bracket_hi;
        out.measured["within_bracket"] =
            (scaled > probe.bracket_lo && scaled < probe.bracket_hi) ? 1.0 : 0.0;
        out.classification = classify_by_speed(est, cfg.pinned_speed_tol);
        finalize(out, cfg, nullptr);
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

void write_outcome_json(const ScenarioOutcome& outcome, const std::string& path)
{
    nlohmann::json j;
    j["name"] = outcome.name;
    j["classification"] = to_string(outcome.classification);
    j["measured"] = outcome.measured;
    j["artifacts"] = outcome.artifacts;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open outcome file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace wavespeed
