#include "wavespeed/model.hpp"

#include <algorithm>
#include <numbers>

namespace wavespeed {

namespace {

double periodic_value(const PeriodicField& f, double x)
{
    if (f.values.size() < 2)
        throw std::invalid_argument("periodic field needs at least 2 node values");
    double s = std::fmod(x, f.period);
    if (s < 0.0)
        s += f.period;
    const double node_dx = f.period / static_cast<double>(f.values.size() - 1);
    const auto i = static_cast<std::size_t>(s / node_dx);
    const std::size_t lo = std::min(i, f.values.size() - 2);
    const double frac = (s - lo * node_dx) / node_dx;
    return f.values[lo] + frac * (f.values[lo + 1] - f.values[lo]);
}

}  // namespace

double evaluate_coefficient(const CoefficientField& f, double x)
{
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantField>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, PeriodicField>) {
                return periodic_value(v, x);
            } else {
                return v.mean + v.amplitude * std::sin(2.0 * v.frequency * std::numbers::pi * x);
            }
        },
        f);
}

bool is_constant_field(const CoefficientField& f)
{
    return std::holds_alternative<ConstantField>(f);
}

double field_min(const CoefficientField& f)
{
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantField>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, PeriodicField>) {
                return *std::min_element(v.values.begin(), v.values.end());
            } else {
                return v.mean - std::abs(v.amplitude);
            }
        },
        f);
}

double field_max(const CoefficientField& f)
{
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantField>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, PeriodicField>) {
                return *std::max_element(v.values.begin(), v.values.end());
            } else {
                return v.mean + std::abs(v.amplitude);
            }
        },
        f);
}

ModelSpec ModelSpec::symmetric_lv(double k, double d)
{
    ModelSpec spec;
    spec.d_u = ConstantField{1.0};
    spec.d_v = ConstantField{d};
    spec.r = 1.0;
    spec.h = k;
    spec.k = k;
    spec.kind = CompetitionKind::LotkaVolterra;
    return spec;
}

void ModelSpec::validate() const
{
    if (r <= 0.0)
        throw std::invalid_argument("growth ratio r must be positive");
    if (h < 0.0 || k < 0.0)
        throw std::invalid_argument("competition rates must be nonnegative");
    if (alpha <= 0.0)
        throw std::invalid_argument("alpha must be positive");
    if (alpha != 1.0 && kind != CompetitionKind::LotkaVolterra)
        throw std::invalid_argument("alpha != 1 is only supported for Lotka-Volterra competition");
    if (field_min(d_u) <= 0.0 || field_min(d_v) <= 0.0)
        throw std::invalid_argument("diffusion coefficients must be uniformly positive");
}

Reaction reaction_terms(const ModelSpec& spec, double u, double v, double x)
{
    const double mu = evaluate_coefficient(spec.mu, x);
    const double a = evaluate_coefficient(spec.a, x);
    Reaction out;
    if (spec.kind == CompetitionKind::LotkaVolterra) {
        out.fu = mu * (u * (a - u) - spec.h * u * v);
        out.fv = mu * (spec.r * v * (a - v) - spec.alpha * spec.k * u * v);
    } else {
        out.fu = mu * (u * (a - u) - spec.h * u * v * v);
        out.fv = mu * (spec.r * v * (a - v) - spec.k * u * u * v);
    }
    return out;
}

Grid1D Grid1D::make(double length, double dx)
{
    if (length <= 0.0 || dx <= 0.0)
        throw std::invalid_argument("grid length and dx must be positive");
    Grid1D g;
    g.length = length;
    g.dx = dx;
    g.n = static_cast<int>(std::lround(length / dx)) + 1;
    if (g.n < 8)
        throw std::invalid_argument("grid must have at least 8 nodes");
    if (std::abs(g.dx * (g.n - 1) - length) > 1e-12 * length)
        throw std::invalid_argument("dx does not divide the domain length");
    return g;
}

}  // namespace wavespeed
