#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wavespeed/frontspeed.hpp"
#include "wavespeed/model.hpp"

namespace wavespeed {

struct AxisRange {
    double min = 1.0;
    double max = 21.0;
    double step = 0.5;

    int count() const;
    double at(int i) const { return min + i * step; }
    void validate(const char* name) const;
};

struct SweepPlan {
    AxisRange d;
    AxisRange k;
    bool appendix_protocol = true;
    // Appendix defaults; overridable when appendix_protocol is off.
    double domain_length = 40.0;
    double dx = 0.02;
    double dt = 0.02;
    double t_final = 40.0;
    double window_start = 32.0;
    double window_end = 40.0;
    int checkpoint_interval = 64;

    void validate() const;
    std::uint64_t hash() const;
};

struct CellResult {
    SpeedEstimate estimate;
    bool failed = false;
    std::string failure;
};

struct SweepResult {
    SweepPlan plan;
    std::vector<CellResult> cells;  // k-major: index = ik * nd + id
    std::uint64_t plan_hash = 0;
    double wall_seconds = 0.0;

    int nd() const { return plan.d.count(); }
    int nk() const { return plan.k.count(); }
    const CellResult& cell(int ik, int id) const { return cells[ik * nd() + id]; }
    double speed(int ik, int id) const;  // NaN when failed or NoCrossing
};

// One symmetric Lotka-Volterra run under the plan's protocol. A front that
// comes within 2 units of a boundary triggers a re-run with the domain
// doubled (up to 160); such cells keep the BoundaryTooClose flag.
SpeedEstimate run_single(double d, double k, const SweepPlan& plan);

// Deterministic parallel sweep; checkpoint_path, when nonempty, is kept up
// to date so an interrupted sweep resumes without recomputing finished
// cells, and is removed on completion.
SweepResult run_sweep(const SweepPlan& plan, int worker_count,
                      const std::string& checkpoint_path = "");

struct ContourSet {
    std::vector<double> levels;
    // polylines[level_index] -> list of (d, k) vertex chains
    std::vector<std::vector<std::vector<std::array<double, 2>>>> polylines;
};

ContourSet extract_contours(const SweepResult& result, const std::vector<double>& levels);
// values[ik][id] over arbitrary axes; NaN cells are masked.
ContourSet extract_contours(const std::vector<std::vector<double>>& values,
                            const std::vector<double>& d_axis, const std::vector<double>& k_axis,
                            const std::vector<double>& levels);

}  // namespace wavespeed
