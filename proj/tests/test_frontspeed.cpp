#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wavespeed/frontspeed.hpp"

using namespace wavespeed;

namespace {

struct Lcg {
    std::uint64_t state = 0xda3e39cb94b95bdbull;
    double uniform(double lo, double hi)
    {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double t = static_cast<double>(state >> 11) / 9007199254740992.0;
        return lo + t * (hi - lo);
    }
};

FrontTrace make_trace(double t0, double t1, double dt_sample, double (*position)(double))
{
    FrontTrace trace;
    for (double t = t0; t <= t1 + 1e-12; t += dt_sample)
        trace.samples.emplace_back(t, position(t));
    return trace;
}

}  // namespace

TEST_CASE("front location of a step profile is the cell midpoint")
{
    const Grid1D grid = Grid1D::make(40.0, 0.02);
    std::vector<double> field(grid.n, 0.0);
    const int m = 1000;  // x = 20
    for (int i = m; i < grid.n; ++i)
        field[i] = 1.0;
    const auto x = locate_front(field, grid, 0.5);
    REQUIRE(x.has_value());
    CHECK(*x == doctest::Approx(grid.x(m - 1) + 0.5 * grid.dx).epsilon(1e-12));
}

TEST_CASE("front location is empty without a crossing")
{
    const Grid1D grid = Grid1D::make(40.0, 0.02);
    CHECK_FALSE(locate_front(std::vector<double>(grid.n, 0.0), grid, 0.5).has_value());
    CHECK_FALSE(locate_front(std::vector<double>(grid.n, 1.0), grid, 0.5).has_value());
}

TEST_CASE("front location of a logistic profile matches the analytic inverse")
{
    const Grid1D grid = Grid1D::make(40.0, 0.02);
    std::vector<double> field(grid.n);
    for (int i = 0; i < grid.n; ++i)
        field[i] = 1.0 / (1.0 + std::exp(20.0 - grid.x(i)));
    for (double level : {0.3, 0.5, 0.8}) {
        const auto x = locate_front(field, grid, level);
        REQUIRE(x.has_value());
        const double exact = 20.0 - std::log(1.0 / level - 1.0);
        CHECK(std::abs(*x - exact) < grid.dx);
    }
}

TEST_CASE("exact line recovers its slope to rounding")
{
    const FrontTrace trace = make_trace(30.0, 40.0, 0.5, +[](double t) { return 30.0 - 0.2 * t; });
    const SpeedEstimate est = estimate_speed(trace, 30.0, 40.0, 1.0);
    CHECK(est.speed == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(est.residual_rms < 1e-12);
    CHECK(est.flags == 0);
    CHECK(est.t_start == doctest::Approx(30.0));
    CHECK(est.t_end == doctest::Approx(40.0));
    // positions run from 24 down to 22; the far end is the nearer boundary
    CHECK(est.boundary_margin == doctest::Approx(40.0 - 24.0));

    const SpeedEstimate scaled = estimate_speed(trace, 30.0, 40.0, 2.0);
    CHECK(scaled.speed == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("stationary front has zero speed")
{
    const FrontTrace trace = make_trace(0.0, 40.0, 0.5, +[](double) { return 20.0; });
    const SpeedEstimate est = estimate_speed(trace, 32.0, 40.0, 1.0);
    CHECK(est.speed == doctest::Approx(0.0));
    CHECK(est.flags == 0);
}

TEST_CASE("noisy line matches an independently computed least-squares slope")
{
    Lcg rng;
    FrontTrace trace;
    for (double t = 30.0; t <= 40.0 + 1e-12; t += 0.5)
        trace.samples.emplace_back(t, 30.0 - 0.3 * t + rng.uniform(-1e-4, 1e-4));

    // Oracle: normal-equation slope from raw sums.
    double n = 0.0, st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    for (const auto& [t, x] : trace.samples) {
        n += 1.0;
        st += t;
        sx += x;
        stt += t * t;
        stx += t * x;
    }
    const double oracle = (n * stx - st * sx) / (n * stt - st * st);

    const SpeedEstimate est = estimate_speed(trace, 30.0, 40.0, 1.0);
    CHECK(est.speed == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(est.speed == doctest::Approx(-0.3).epsilon(1e-3));
}

TEST_CASE("fits are translation invariant and flip under reflection")
{
    Lcg rng;
    FrontTrace trace;
    for (double t = 30.0; t <= 40.0 + 1e-12; t += 0.5)
        trace.samples.emplace_back(t, 25.0 - 0.15 * t + rng.uniform(-1e-3, 1e-3));
    const double base = estimate_speed(trace, 30.0, 40.0, 1.0).speed;

    FrontTrace shifted = trace;
    for (auto& s : shifted.samples)
        s.second += 3.0;
    CHECK(estimate_speed(shifted, 30.0, 40.0, 1.0).speed == doctest::Approx(base).epsilon(1e-12));

    FrontTrace reflected = trace;
    for (auto& s : reflected.samples)
        s.second = 40.0 - s.second;
    CHECK(estimate_speed(reflected, 30.0, 40.0, 1.0).speed ==
          doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("quality flags fire on bad traces")
{
    Lcg rng;
    FrontTrace noisy = make_trace(30.0, 40.0, 0.5, +[](double t) { return 30.0 - 0.2 * t; });
    for (auto& s : noisy.samples)
        s.second += rng.uniform(-0.5, 0.5);
    CHECK((estimate_speed(noisy, 30.0, 40.0, 1.0).flags & flag::HighResidual) != 0);

    FrontTrace zigzag = make_trace(30.0, 40.0, 0.5, +[](double t) { return 30.0 - 0.2 * t; });
    zigzag.samples[10].second += 1.0;  // one against-trend jump
    CHECK((estimate_speed(zigzag, 30.0, 40.0, 1.0).flags & flag::NonMonotoneFront) != 0);

    const FrontTrace edge = make_trace(30.0, 40.0, 0.5, +[](double t) { return 9.0 - 0.2 * t; });
    CHECK((estimate_speed(edge, 30.0, 40.0, 1.0).flags & flag::BoundaryTooClose) != 0);
}

TEST_CASE("too few samples in the window is an error")
{
    const FrontTrace trace = make_trace(30.0, 40.0, 0.5, +[](double t) { return 30.0 - 0.2 * t; });
    CHECK_THROWS_AS(estimate_speed(trace, 38.5, 40.0, 1.0), EstimationError);
    CHECK_THROWS_AS(estimate_speed(FrontTrace{}, 0.0, 40.0, 1.0), EstimationError);
}

TEST_CASE("pulsating fit recovers the mean drift of a wobbling front")
{
    const FrontTrace trace = make_trace(
        0.0, 20.0, 0.25, +[](double t) { return 30.0 - 0.1 * t + 0.02 * std::sin(2.0 * M_PI * t); });
    const SpeedEstimate est = estimate_pulsating_speed(trace, 1.0, 0.0, 20.0, 1.0);
    CHECK(std::abs(est.speed + 0.1) < 2e-3);
    CHECK(est.wobble > 0.0);
    CHECK(est.wobble < 0.1);
    CHECK_FALSE(est.pinned);
}

TEST_CASE("pulsating fit marks an oscillating stationary front as pinned")
{
    const FrontTrace trace = make_trace(
        0.0, 20.0, 0.25, +[](double t) { return 30.0 + 0.002 * std::sin(2.0 * M_PI * t); });
    const SpeedEstimate est = estimate_pulsating_speed(trace, 1.0, 0.0, 20.0, 1.0);
    CHECK(est.pinned);
    CHECK(std::abs(est.speed) < 1e-3);
}

TEST_CASE("pulsating fit degenerates to the plain fit on a line")
{
    const FrontTrace trace = make_trace(30.0, 40.0, 0.5, +[](double t) { return 30.0 - 0.2 * t; });
    const SpeedEstimate plain = estimate_speed(trace, 30.0, 40.0, 1.0);
    const SpeedEstimate puls = estimate_pulsating_speed(trace, 1.0, 30.0, 40.0, 1.0);
    CHECK(puls.speed == doctest::Approx(plain.speed).epsilon(1e-14));
    CHECK(puls.wobble < 1e-12);
}

TEST_CASE("flag names round trip")
{
    for (unsigned f : {0u, flag::BoundaryTooClose, flag::HighResidual,
                       flag::BoundaryTooClose | flag::NonMonotoneFront | flag::NoCrossing}) {
        CHECK(flag::from_string(flag::to_string(f)) == f);
    }
    CHECK_THROWS_AS(flag::from_string("Bogus"), std::invalid_argument);
}
