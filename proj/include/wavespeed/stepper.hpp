#pragma once

#include <stdexcept>
#include <vector>

#include "wavespeed/model.hpp"

namespace wavespeed {

struct StepperConfig {
    double dt = 0.02;
    bool rescaled = false;  // coordinates carry the x -> x*sqrt(d) change
};

class SolverBlowup : public std::runtime_error {
public:
    explicit SolverBlowup(const std::string& what) : std::runtime_error(what) {}
};

struct RescaledModel {
    ModelSpec spec;
    double speed_factor = 1.0;  // multiply measured slopes by this to recover original units
};

// x -> x*sqrt(d): d_u becomes 1/d, d_v becomes 1, speeds shrink by sqrt(d).
// Both diffusion fields must be constant with d_u = 1 and d_v = d >= 1.
RescaledModel apply_appendix_rescaling(const ModelSpec& spec);

// Backward-Euler diffusion with no-flux ends. The tridiagonal matrix is
// constant in time, so the Thomas factorization is done once.
class DiffusionSolver {
public:
    DiffusionSolver(const CoefficientField& d, const Grid1D& grid, double dt);

    void apply(std::vector<double>& field) const;

    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& diagonal() const { return diag_; }
    const std::vector<double>& upper() const { return upper_; }

private:
    std::vector<double> lower_, diag_, upper_;  // original matrix rows
    std::vector<double> elim_, pivot_;          // cached elimination factors
    mutable std::vector<double> work_;
};

// Reaction-then-diffusion Lie splitting, one step per call.
class Stepper {
public:
    Stepper(const ModelSpec& spec, const Grid1D& grid, const StepperConfig& cfg);

    void advance(State& state) const;

    // Crude Lipschitz bound of the reaction; dt * bound >= 1 merits a warning.
    double reaction_lipschitz_bound() const { return lipschitz_; }
    bool dt_warning() const { return cfg_.dt * lipschitz_ >= 1.0; }

private:
    ModelSpec spec_;
    Grid1D grid_;
    StepperConfig cfg_;
    DiffusionSolver diff_u_, diff_v_;
    std::vector<double> mu_, a_;  // node samples of the reaction modulation fields
    double lipschitz_ = 0.0;
};

// One-shot wrappers.
void diffusion_step(std::vector<double>& field, const CoefficientField& d, const Grid1D& grid,
                    double dt);
void step(State& state, const ModelSpec& spec, const Grid1D& grid, const StepperConfig& cfg);

// Largest dt not exceeding base_dt with dt * lipschitz <= margin.
double suggested_dt(const ModelSpec& spec, double base_dt, double margin = 0.4);

}  // namespace wavespeed
