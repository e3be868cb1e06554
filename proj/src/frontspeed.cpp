#include "wavespeed/frontspeed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wavespeed {

namespace flag {

std::string to_string(unsigned flags)
{
    std::string out;
    const auto append = [&out](const char* name) {
        if (!out.empty())
            out += ';';
        out += name;
    };
    if (flags & BoundaryTooClose)
        append("BoundaryTooClose");
    if (flags & NonMonotoneFront)
        append("NonMonotoneFront");
    if (flags & HighResidual)
        append("HighResidual");
    if (flags & NoCrossing)
        append("NoCrossing");
    return out;
}

unsigned from_string(const std::string& text)
{
    unsigned flags = 0;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ';')) {
        if (token == "BoundaryTooClose")
            flags |= BoundaryTooClose;
        else if (token == "NonMonotoneFront")
            flags |= NonMonotoneFront;
        else if (token == "HighResidual")
            flags |= HighResidual;
        else if (token == "NoCrossing")
            flags |= NoCrossing;
        else if (!token.empty())
            throw std::invalid_argument("unknown flag name: " + token);
    }
    return flags;
}

}  // namespace flag

std::optional<double> locate_front(const std::vector<double>& field, const Grid1D& grid,
                                   double level)
{
    for (int i = grid.n - 1; i > 0; --i) {
        const double hi = field[i] - level;
        const double lo = field[i - 1] - level;
        if (hi == 0.0)
            return grid.x(i);
        if ((lo <= 0.0 && hi > 0.0) || (lo >= 0.0 && hi < 0.0)) {
            const double frac = lo / (lo - hi);
            return grid.x(i - 1) + frac * grid.dx;
        }
    }
    if (field[0] == level)
        return grid.x(0);
    return std::nullopt;
}

std::optional<double> locate_front(const State& state, const Grid1D& grid, double level,
                                   Species species)
{
    return locate_front(species == Species::V ? state.v : state.u, grid, level);
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<std::pair<double, double>>& pts)
{
    const auto n = static_cast<double>(pts.size());
    double st = 0.0, sx = 0.0;
    for (const auto& [t, x] : pts) {
        st += t;
        sx += x;
    }
    const double tbar = st / n;
    const double xbar = sx / n;
    double stt = 0.0, stx = 0.0;
    for (const auto& [t, x] : pts) {
        stt += (t - tbar) * (t - tbar);
        stx += (t - tbar) * (x - xbar);
    }
    LineFit fit;
    fit.slope = stx / stt;
    fit.intercept = xbar - fit.slope * tbar;
    fit.residuals.reserve(pts.size());
    double ss = 0.0;
    for (const auto& [t, x] : pts) {
        const double r = x - (fit.intercept + fit.slope * t);
        fit.residuals.push_back(r);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

SpeedEstimate fit_window(const FrontTrace& trace, double t0, double t1, double rescale_factor,
                         const SpeedOptions& opts)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : trace.samples)
        if (s.first >= t0 - 1e-12 && s.first <= t1 + 1e-12)
            pts.push_back(s);
    if (pts.size() < 5) {
        std::ostringstream msg;
        msg << "speed estimation needs at least 5 samples in [" << t0 << ", " << t1 << "], got "
            << pts.size();
        throw EstimationError(msg.str());
    }

    const LineFit fit = fit_line(pts);

    SpeedEstimate est;
    est.speed = fit.slope * rescale_factor;
    est.residual_rms = fit.rms;
    est.t_start = pts.front().first;
    est.t_end = pts.back().first;

    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [t, x] : pts)
        margin = std::min(margin, std::min(x, trace.domain_length - x));
    est.boundary_margin = margin;
    if (margin < opts.boundary_margin_min)
        est.flags |= flag::BoundaryTooClose;

    if (est.residual_rms > opts.residual_coefficient * trace.dx * static_cast<double>(pts.size()))
        est.flags |= flag::HighResidual;

    // Against-trend motion beyond tolerance means the front is not tracking a
    // single traveling interface.
    const double direction = (fit.slope >= 0.0) ? 1.0 : -1.0;
    const double tol = std::max(opts.monotone_tol, 2.0 * trace.dx);
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (direction * (pts[i].second - pts[i - 1].second) < -tol)
            est.flags |= flag::NonMonotoneFront;

    return est;
}

}  // namespace

SpeedEstimate estimate_speed(const FrontTrace& trace, double t0, double t1,
                             double rescale_factor, const SpeedOptions& opts)
{
    return fit_window(trace, t0, t1, rescale_factor, opts);
}

SpeedEstimate estimate_pulsating_speed(const FrontTrace& trace, double period_L, double t0,
                                       double t1, double rescale_factor, const SpeedOptions& opts)
{
    SpeedOptions relaxed = opts;
    // The L-periodic wobble is part of the signal here, not a fit defect.
    relaxed.monotone_tol = std::max(opts.monotone_tol, period_L);
    relaxed.residual_coefficient = std::max(opts.residual_coefficient, 1.0);

    SpeedEstimate est = fit_window(trace, t0, t1, rescale_factor, relaxed);

    std::vector<std::pair<double, double>> pts;
    for (const auto& s : trace.samples)
        if (s.first >= t0 - 1e-12 && s.first <= t1 + 1e-12)
            pts.push_back(s);
    const LineFit fit = fit_line(pts);
    const auto [lo, hi] = std::minmax_element(fit.residuals.begin(), fit.residuals.end());
    est.wobble = *hi - *lo;
    est.pinned = std::abs(est.speed) < opts.pinned_speed_tol && est.wobble <= 2.0 * period_L;
    return est;
}

void write_trace_csv(const FrontTrace& trace, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open trace file: " + path);
    out << "t,x_front\n";
    char buf[80];
    for (const auto& [t, x] : trace.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, x);
        out << buf;
    }
}

}  // namespace wavespeed
