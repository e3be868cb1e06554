#include "wavespeed/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace wavespeed {

State segregated_initial_state(const Grid1D& grid, double split_x)
{
    State state;
    state.u.assign(grid.n, 0.0);
    state.v.assign(grid.n, 0.0);
    for (int i = 0; i < grid.n; ++i) {
        if (grid.x(i) < split_x)
            state.u[i] = 1.0;
        else
            state.v[i] = 1.0;
    }
    return state;
}

void write_snapshot_csv(const State& state, const Grid1D& grid, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open snapshot file: " + path);
    out << "x,u,v\n";
    char buf[120];
    for (int i = 0; i < grid.n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.x(i), state.u[i], state.v[i]);
        out << buf;
    }
}

RunOutput simulate_front(const RunSetup& setup, const State& initial)
{
    const Grid1D& grid = setup.grid;
    Stepper stepper(setup.spec, grid, setup.stepper);

    RunOutput out;
    out.trace.level = setup.level;
    out.trace.species = setup.species;
    out.trace.domain_length = grid.length;
    out.trace.dx = grid.dx;

    State state = initial;
    const double dt = setup.stepper.dt;
    const long total_steps = std::lround(setup.t_final / dt);

    auto sample = [&](const State& s) {
        if (auto x = locate_front(s, grid, setup.level, setup.species))
            out.trace.samples.emplace_back(s.t, *x);
    };
    auto snapshot = [&](const State& s) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_t%.6g.csv", s.t);
        const auto path = (std::filesystem::path(setup.snapshot_dir) / name).string();
        write_snapshot_csv(s, grid, path);
        out.artifacts.push_back(path);
    };

    std::size_t next_snapshot = 0;
    double next_sample = 0.0;
    sample(state);
    next_sample = setup.sample_interval;
    while (!setup.snapshot_dir.empty() && next_snapshot < setup.snapshot_times.size() &&
           setup.snapshot_times[next_snapshot] <= state.t + 1e-9) {
        snapshot(state);
        ++next_snapshot;
    }

    for (long i = 1; i <= total_steps; ++i) {
        stepper.advance(state);
        state.t = i * dt;  // avoid accumulation drift in sample alignment
        if (state.t + 1e-9 >= next_sample) {
            sample(state);
            next_sample += setup.sample_interval;
        }
        while (!setup.snapshot_dir.empty() && next_snapshot < setup.snapshot_times.size() &&
               setup.snapshot_times[next_snapshot] <= state.t + 1e-9) {
            snapshot(state);
            ++next_snapshot;
        }
    }

    out.final_state = std::move(state);
    return out;
}

RunOutput simulate_front(const RunSetup& setup)
{
    return simulate_front(setup, segregated_initial_state(setup.grid, setup.grid.length / 2.0));
}

}  // namespace wavespeed
