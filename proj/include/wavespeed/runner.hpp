#pragma once

#include <functional>
#include <string>

#include "wavespeed/frontspeed.hpp"
#include "wavespeed/model.hpp"
#include "wavespeed/stepper.hpp"

namespace wavespeed {

struct RunSetup {
    ModelSpec spec;
    Grid1D grid;
    StepperConfig stepper;
    double t_final = 40.0;
    double sample_interval = 0.5;
    double level = 0.5;
    Species species = Species::V;
    double rescale_factor = 1.0;
    std::vector<double> snapshot_times;  // optional CSV dumps
    std::string snapshot_dir;
};

struct RunOutput {
    FrontTrace trace;
    State final_state;
    std::vector<std::string> artifacts;
};

// u = 1 left of the split, v = 1 right of it.
State segregated_initial_state(const Grid1D& grid, double split_x);

// Steps to t_final, sampling the front every sample_interval time units.
// Samples where the level is never crossed are skipped.
RunOutput simulate_front(const RunSetup& setup, const State& initial);
RunOutput simulate_front(const RunSetup& setup);

void write_snapshot_csv(const State& state, const Grid1D& grid, const std::string& path);

}  // namespace wavespeed
