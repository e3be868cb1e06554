#pragma once

#include <map>
#include <string>
#include <vector>

#include "wavespeed/frontspeed.hpp"
#include "wavespeed/model.hpp"

namespace wavespeed {

enum class Classification { UInvades, VInvades, Pinned, Coexistence, Inconclusive };

const char* to_string(Classification c);

struct ScenarioOutcome {
    std::string name;
    std::map<std::string, double> measured;
    Classification classification = Classification::Inconclusive;
    std::vector<std::string> artifacts;
};

struct ScenarioConfig {
    double dx = 0.02;
    double dt = 0.02;  // capped automatically so dt * Lipschitz stays small
    double t_final = 40.0;
    double window_start = 32.0;
    double window_end = 40.0;
    double pinned_speed_tol = 1e-3;
    double loser_supnorm = 0.01;
    std::string output_dir;  // when set, outcome JSON and traces are written here
};

struct PatchPlan {
    int patches = 4;             // favorable patches, u and v alternating
    double favorable_width = 10.0;
    double gap_width = 10.0;
};

// mu multiplies both reaction brackets; v diffuses at rate d.
ScenarioOutcome scenario_periodic_resources(double d, double k, const CoefficientField& mu,
                                            const ScenarioConfig& cfg = {});

// v gets diffusion 1 + (3/4) sin(2*frequency*pi*x) and the alpha-scaled
// competition loss; frequency = 0 keeps the uniform baseline.
ScenarioOutcome scenario_oscillating_diffusion(double k, int frequency, double alpha,
                                               const ScenarioConfig& cfg = {});

// Blind competition (h = k = 1) with heterogeneous intrinsic growth a(x) on
// a bounded no-flux domain; classification by long-time sup-norms.
ScenarioOutcome scenario_dockery_bounded(const CoefficientField& a, double d, double domain_length,
                                         const ScenarioConfig& cfg = {});

ScenarioOutcome scenario_segregated_steady_state(const PatchPlan& plan, double k, double d,
                                                 const ScenarioConfig& cfg = {});

// Front speed of a two-species model with constant diffusion fields, in
// original coordinates; rescales internally when d_u = 1 and d_v >= 1.
// The domain grows (up to 160) when the front nears a boundary.
SpeedEstimate measure_bistable_speed(const ModelSpec& spec, const ScenarioConfig& cfg = {});

// Also re-runs at 2d and reports whether the sign agrees.
ScenarioOutcome scenario_cubic_sign_law(double r, double h, double k, double d,
                                        const ScenarioConfig& cfg = {});

struct AsymptoticProbe {
    double k = 2.0;
    double d = 4.0;
    double bracket_lo = -2.0;  // bracket on the scaled quantity below
    double bracket_hi = 0.0;
    bool scaled_by_sqrt_d = false;  // bracket applies to c/sqrt(d) instead of c
};

std::vector<ScenarioOutcome> scenario_asymptotic_probes(const std::vector<AsymptoticProbe>& probes,
                                                        const ScenarioConfig& cfg = {});

void write_outcome_json(const ScenarioOutcome& outcome, const std::string& path);

}  // namespace wavespeed
