#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "wavespeed/sweep.hpp"

using namespace wavespeed;

namespace {

std::vector<double> axis(double lo, double hi, double step)
{
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-9; x += step)
        v.push_back(x);
    return v;
}

}  // namespace

TEST_CASE("axis ranges enumerate the documented grids")
{
    const AxisRange standard;
    CHECK(standard.count() == 41);
    CHECK(standard.at(0) == doctest::Approx(1.0));
    CHECK(standard.at(40) == doctest::Approx(21.0));

    const AxisRange fine{1.0, 21.0, 0.1};
    CHECK(fine.count() == 201);

    const AxisRange small{1.0, 3.0, 0.25};
    CHECK(small.count() == 9);

    CHECK_THROWS_AS((AxisRange{1.0, 2.0, 0.0}.validate("d")), std::invalid_argument);
    CHECK_THROWS_AS((AxisRange{3.0, 2.0, 0.5}.validate("d")), std::invalid_argument);
}

TEST_CASE("plan hashing is stable and sensitive to every knob")
{
    SweepPlan base;
    CHECK(base.hash() == base.hash());
    SweepPlan other = base;
    other.dx = 0.01;
    CHECK(other.hash() != base.hash());
    other = base;
    other.k.step = 0.1;
    CHECK(other.hash() != base.hash());
    other = base;
    other.window_start = 30.0;
    CHECK(other.hash() != base.hash());

    SweepPlan bad;
    bad.d.min = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = base;
    bad.window_start = 39.0;
    bad.window_end = 38.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("contours of a tilted plane are a vertical line")
{
    const std::vector<double> d_axis = axis(1.0, 3.0, 0.25);
    const std::vector<double> k_axis = axis(1.0, 2.0, 0.25);
    std::vector<std::vector<double>> values(k_axis.size(),
                                            std::vector<double>(d_axis.size()));
    for (std::size_t ik = 0; ik < k_axis.size(); ++ik)
        for (std::size_t id = 0; id < d_axis.size(); ++id)
            values[ik][id] = -(d_axis[id] - 1.0);

    const ContourSet cs = extract_contours(values, d_axis, k_axis, {-1.0, -5.0, 1.0});
    REQUIRE(cs.levels.size() == 3);

    std::size_t vertices = 0;
    for (const auto& line : cs.polylines[0])
        for (const auto& p : line) {
            CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-9));
            CHECK(p[1] >= 1.0 - 1e-9);
            CHECK(p[1] <= 2.0 + 1e-9);
            ++vertices;
        }
    CHECK(vertices >= 2);
    CHECK(cs.polylines[1].empty());  // below the data range
    CHECK(cs.polylines[2].empty());  // above the data range
}

TEST_CASE("contours of a radial bowl stay within a cell of the true circle")
{
    const std::vector<double> d_axis = axis(0.0, 4.0, 0.05);
    const std::vector<double> k_axis = axis(0.0, 4.0, 0.05);
    std::vector<std::vector<double>> values(k_axis.size(),
                                            std::vector<double>(d_axis.size()));
    for (std::size_t ik = 0; ik < k_axis.size(); ++ik)
        for (std::size_t id = 0; id < d_axis.size(); ++id)
            values[ik][id] = -std::hypot(d_axis[id] - 2.0, k_axis[ik] - 2.0);

    const ContourSet cs = extract_contours(values, d_axis, k_axis, {-1.0});
    const double cell_diagonal = std::hypot(0.05, 0.05);
    std::size_t vertices = 0;
    for (const auto& line : cs.polylines[0])
        for (const auto& p : line) {
            const double radius = std::hypot(p[0] - 2.0, p[1] - 2.0);
            CHECK(std::abs(radius - 1.0) < cell_diagonal);
            ++vertices;
        }
    CHECK(vertices > 20);
}

TEST_CASE("contours skip cells holding NaN")
{
    const std::vector<double> d_axis = axis(1.0, 3.0, 0.25);
    const std::vector<double> k_axis = axis(1.0, 2.0, 0.25);
    std::vector<std::vector<double>> values(k_axis.size(),
                                            std::vector<double>(d_axis.size()));
    for (std::size_t ik = 0; ik < k_axis.size(); ++ik)
        for (std::size_t id = 0; id < d_axis.size(); ++id)
            values[ik][id] = d_axis[id] > 2.6 ? std::nan("") : -(d_axis[id] - 1.0);

    const ContourSet cs = extract_contours(values, d_axis, k_axis, {-1.0});
    std::size_t vertices = 0;
    for (const auto& line : cs.polylines[0])
        for (const auto& p : line) {
            CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-9));
            ++vertices;
        }
    CHECK(vertices >= 2);
}

TEST_CASE("single protocol run at equal diffusion rates is stationary")
{
    SweepPlan plan;
    const SpeedEstimate est = run_single(1.0, 2.0, plan);
    CHECK(std::abs(est.speed) <= 1e-3);
    CHECK((est.flags & flag::NoCrossing) == 0);
    CHECK_THROWS_AS(run_single(0.5, 2.0, plan), std::invalid_argument);
}

TEST_CASE("sweep output does not depend on the worker count")
{
    SweepPlan plan;
    plan.d = AxisRange{4.0, 8.0, 2.0};
    plan.k = AxisRange{2.0, 4.0, 1.0};
    const SweepResult serial = run_sweep(plan, 1);
    const SweepResult parallel = run_sweep(plan, 3);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        CHECK(serial.cells[i].failed == parallel.cells[i].failed);
        CHECK(serial.cells[i].estimate.speed == parallel.cells[i].estimate.speed);
        CHECK(serial.cells[i].estimate.residual_rms == parallel.cells[i].estimate.residual_rms);
        CHECK(serial.cells[i].estimate.flags == parallel.cells[i].estimate.flags);
    }
}

TEST_CASE("checkpointed cells are trusted verbatim on resume")
{
    SweepPlan plan;
    plan.d = AxisRange{4.0, 5.0, 1.0};
    plan.k = AxisRange{2.0, 3.0, 1.0};
    const std::string path = (std::filesystem::temp_directory_path() / "resume_test.json").string();

    // A poisoned speed in cell 0 must survive: resuming may not recompute it.
    nlohmann::json cell0;
    cell0["i"] = 0;
    cell0["failed"] = false;
    cell0["speed"] = 123.0;
    cell0["residual_rms"] = 0.0;
    cell0["t_start"] = 32.0;
    cell0["t_end"] = 40.0;
    cell0["boundary_margin"] = 10.0;
    cell0["flags"] = "";
    cell0["wobble"] = 0.0;
    cell0["pinned"] = false;
    nlohmann::json ckpt;
    ckpt["plan_hash"] = plan.hash();
    ckpt["cells"] = nlohmann::json::array({cell0});
    {
        std::ofstream out(path);
        out << ckpt.dump();
    }

    const SweepResult resumed = run_sweep(plan, 1, path);
    CHECK(resumed.cells[0].estimate.speed == 123.0);
    CHECK_FALSE(std::filesystem::exists(path));  // removed once complete

    const SweepResult fresh = run_sweep(plan, 1);
    for (std::size_t i = 1; i < fresh.cells.size(); ++i)
        CHECK(resumed.cells[i].estimate.speed == fresh.cells[i].estimate.speed);

    // A checkpoint from a different plan must be rejected.
    ckpt["plan_hash"] = plan.hash() + 1;
    {
        std::ofstream out(path);
        out << ckpt.dump();
    }
    CHECK_THROWS_AS(run_sweep(plan, 1, path), std::runtime_error);
    std::filesystem::remove(path);
}
