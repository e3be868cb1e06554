#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wavespeed {

enum class CompetitionKind { LotkaVolterra, Cubic };

// Spatial coefficient fields. Periodic fields are piecewise linear through
// node values at i*period/(values.size()-1); the last node wraps onto the
// first of the next period.
struct ConstantField {
    double value = 1.0;
};

struct PeriodicField {
    double period = 1.0;
    std::vector<double> values;
};

// x -> mean + amplitude * sin(2 * frequency * pi * x)
struct SineField {
    double mean = 1.0;
    double amplitude = 0.0;
    int frequency = 1;
};

using CoefficientField = std::variant<ConstantField, PeriodicField, SineField>;

double evaluate_coefficient(const CoefficientField& f, double x);
bool is_constant_field(const CoefficientField& f);
double field_min(const CoefficientField& f);
double field_max(const CoefficientField& f);

// Two-species competition-diffusion problem:
//   u_t = (d_u u_x)_x + mu(x) [ u (a(x) - u) - h u v^p ]
//   v_t = (d_v v_x)_x + mu(x) [ r v (a(x) - v) - alpha k u^p v ]
// with p = 1 for LotkaVolterra and p = 2 for Cubic.
struct ModelSpec {
    CoefficientField d_u = ConstantField{1.0};
    CoefficientField d_v = ConstantField{1.0};
    double r = 1.0;
    double h = 1.0;
    double k = 1.0;
    double alpha = 1.0;
    CoefficientField mu = ConstantField{1.0};
    CoefficientField a = ConstantField{1.0};
    CompetitionKind kind = CompetitionKind::LotkaVolterra;

    // d_u = 1, r = 1, h = k, everything else trivial.
    static ModelSpec symmetric_lv(double k, double d);

    void validate() const;
};

struct Grid1D {
    double length = 40.0;
    double dx = 0.02;
    int n = 2001;

    static Grid1D make(double length, double dx);
    double x(int i) const { return i * dx; }
};

struct State {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> v;
};

struct Reaction {
    double fu = 0.0;
    double fv = 0.0;
};

Reaction reaction_terms(const ModelSpec& spec, double u, double v, double x);

}  // namespace wavespeed
