#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavespeed/model.hpp"

namespace wavespeed {

namespace flag {
inline constexpr unsigned BoundaryTooClose = 1u << 0;
inline constexpr unsigned NonMonotoneFront = 1u << 1;
inline constexpr unsigned HighResidual = 1u << 2;
inline constexpr unsigned NoCrossing = 1u << 3;

std::string to_string(unsigned flags);
unsigned from_string(const std::string& text);
}  // namespace flag

enum class Species { U, V };

struct FrontTrace {
    std::vector<std::pair<double, double>> samples;  // (t, x_front)
    double level = 0.5;
    Species species = Species::V;
    double domain_length = 40.0;
    double dx = 0.02;
};

struct SpeedEstimate {
    double speed = 0.0;  // original-coordinate units, rescale factor applied
    double residual_rms = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    double boundary_margin = 0.0;
    unsigned flags = 0;
    double wobble = 0.0;  // peak-to-peak residual oscillation (pulsating fit only)
    bool pinned = false;
};

struct SpeedOptions {
    double residual_coefficient = 0.05;   // HighResidual when rms > coeff * dx * count
    double boundary_margin_min = 2.0;     // BoundaryTooClose below this distance
    double pinned_speed_tol = 1e-3;
    double monotone_tol = 0.0;            // allowed against-trend motion per sample
};

class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

// First sign change of field - level scanning from the right end, linearly
// interpolated; nullopt when the level is never crossed.
std::optional<double> locate_front(const std::vector<double>& field, const Grid1D& grid,
                                   double level);
std::optional<double> locate_front(const State& state, const Grid1D& grid, double level,
                                   Species species);

SpeedEstimate estimate_speed(const FrontTrace& trace, double t0, double t1,
                             double rescale_factor, const SpeedOptions& opts = {});

// Same line fit, plus the peak-to-peak wobble that pulsating fronts show
// around linear motion; a near-zero slope is classified as pinned.
SpeedEstimate estimate_pulsating_speed(const FrontTrace& trace, double period_L, double t0,
                                       double t1, double rescale_factor,
                                       const SpeedOptions& opts = {});

void write_trace_csv(const FrontTrace& trace, const std::string& path);

}  // namespace wavespeed
