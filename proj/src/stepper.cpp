#include "wavespeed/stepper.hpp"

#include <cmath>
#include <sstream>

namespace wavespeed {

RescaledModel apply_appendix_rescaling(const ModelSpec& spec)
{
    if (!is_constant_field(spec.d_u) || !is_constant_field(spec.d_v))
        throw std::invalid_argument("appendix rescaling requires constant diffusion fields");
    const double du = std::get<ConstantField>(spec.d_u).value;
    const double d = std::get<ConstantField>(spec.d_v).value;
    if (std::abs(du - 1.0) > 1e-12)
        throw std::invalid_argument("appendix rescaling expects d_u = 1");
    if (d < 1.0)
        throw std::invalid_argument("appendix rescaling expects d >= 1");
    RescaledModel out;
    out.spec = spec;
    out.spec.d_u = ConstantField{1.0 / d};
    out.spec.d_v = ConstantField{1.0};
    out.speed_factor = std::sqrt(d);
    return out;
}

DiffusionSolver::DiffusionSolver(const CoefficientField& d, const Grid1D& grid, double dt)
{
    const int n = grid.n;
    const double r = dt / (grid.dx * grid.dx);
    lower_.assign(n, 0.0);
    diag_.assign(n, 0.0);
    upper_.assign(n, 0.0);

    // Face-centered coefficients, arithmetic mean of adjacent nodes.
    std::vector<double> face(n - 1);
    for (int i = 0; i + 1 < n; ++i)
        face[i] = 0.5 * (evaluate_coefficient(d, grid.x(i)) + evaluate_coefficient(d, grid.x(i + 1)));

    // Ghost-node reflection at both ends doubles the single interior face.
    diag_[0] = 1.0 + 2.0 * r * face[0];
    upper_[0] = -2.0 * r * face[0];
    for (int i = 1; i + 1 < n; ++i) {
        lower_[i] = -r * face[i - 1];
        upper_[i] = -r * face[i];
        diag_[i] = 1.0 + r * (face[i - 1] + face[i]);
    }
    lower_[n - 1] = -2.0 * r * face[n - 2];
    diag_[n - 1] = 1.0 + 2.0 * r * face[n - 2];

    // Thomas elimination factors, reusable because the matrix never changes.
    elim_.assign(n, 0.0);
    pivot_.assign(n, 0.0);
    pivot_[0] = diag_[0];
    for (int i = 1; i < n; ++i) {
        elim_[i] = lower_[i] / pivot_[i - 1];
        pivot_[i] = diag_[i] - elim_[i] * upper_[i - 1];
        if (pivot_[i] == 0.0)
            throw SolverBlowup("singular tridiagonal diffusion system");
    }
    work_.assign(n, 0.0);
}

void DiffusionSolver::apply(std::vector<double>& field) const
{
    const auto n = field.size();
    work_[0] = field[0];
    for (std::size_t i = 1; i < n; ++i)
        work_[i] = field[i] - elim_[i] * work_[i - 1];
    field[n - 1] = work_[n - 1] / pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        field[i] = (work_[i] - upper_[i] * field[i + 1]) / pivot_[i];
}

Stepper::Stepper(const ModelSpec& spec, const Grid1D& grid, const StepperConfig& cfg)
    : spec_(spec),
      grid_(grid),
      cfg_(cfg),
      diff_u_(spec.d_u, grid, cfg.dt),
      diff_v_(spec.d_v, grid, cfg.dt)
{
    mu_.resize(grid.n);
    a_.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        mu_[i] = evaluate_coefficient(spec.mu, grid.x(i));
        a_[i] = evaluate_coefficient(spec.a, grid.x(i));
    }

    const double mu_max = field_max(spec.mu);
    const double a_max = field_max(spec.a);
    const double cap = std::max(1.0, a_max);
    const double p = (spec.kind == CompetitionKind::Cubic) ? cap * cap : cap;
    const double lu = a_max + 2.0 * cap + spec.h * p;
    const double lv = spec.r * (a_max + 2.0 * cap) + spec.alpha * spec.k * p;
    lipschitz_ = mu_max * std::max(lu, lv);
}

void Stepper::advance(State& state) const
{
    const double dt = cfg_.dt;
    const int n = grid_.n;

    for (int i = 0; i < n; ++i) {
        const double u = state.u[i];
        const double v = state.v[i];
        double fu, fv;
        if (spec_.kind == CompetitionKind::LotkaVolterra) {
            fu = mu_[i] * (u * (a_[i] - u) - spec_.h * u * v);
            fv = mu_[i] * (spec_.r * v * (a_[i] - v) - spec_.alpha * spec_.k * u * v);
        } else {
            fu = mu_[i] * (u * (a_[i] - u) - spec_.h * u * v * v);
            fv = mu_[i] * (spec_.r * v * (a_[i] - v) - spec_.k * u * u * v);
        }
        state.u[i] = u + dt * fu;
        state.v[i] = v + dt * fv;
    }

    diff_u_.apply(state.u);
    diff_v_.apply(state.v);
    state.t += dt;

    for (int i = 0; i < n; ++i) {
        double& u = state.u[i];
        double& v = state.v[i];
        if (!std::isfinite(u) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite state at t=" << state.t << " x=" << grid_.x(i)
                << " (k=" << spec_.k << ", d=" << field_max(spec_.d_v) << ")";
            throw SolverBlowup(msg.str());
        }
        // Roundoff guard only; genuine undershoot is left visible.
        if (u < 0.0 && u > -1e-12)
            u = 0.0;
        if (v < 0.0 && v > -1e-12)
            v = 0.0;
    }
}

void diffusion_step(std::vector<double>& field, const CoefficientField& d, const Grid1D& grid,
                    double dt)
{
    DiffusionSolver solver(d, grid, dt);
    solver.apply(field);
}

void step(State& state, const ModelSpec& spec, const Grid1D& grid, const StepperConfig& cfg)
{
    Stepper stepper(spec, grid, cfg);
    stepper.advance(state);
}

double suggested_dt(const ModelSpec& spec, double base_dt, double margin)
{
    Grid1D probe = Grid1D::make(1.0, 1.0 / 16.0);
    Stepper stepper(spec, probe, StepperConfig{base_dt});
    const double bound = stepper.reaction_lipschitz_bound();
    if (base_dt * bound <= margin)
        return base_dt;
    return margin / bound;
}

}  // namespace wavespeed
