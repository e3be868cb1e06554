#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "wavespeed/model.hpp"

using namespace wavespeed;

namespace {

// Small deterministic generator for property checks.
struct Lcg {
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    double uniform(double lo, double hi)
    {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double t = static_cast<double>(state >> 11) / 9007199254740992.0;
        return lo + t * (hi - lo);
    }
};

}  // namespace

TEST_CASE("constant field ignores position")
{
    const CoefficientField f = ConstantField{1.0};
    CHECK(evaluate_coefficient(f, 3.7) == 1.0);
}

TEST_CASE("sine field matches the oscillating-diffusion form")
{
    const CoefficientField f = SineField{1.0, 0.75, 5};
    CHECK(evaluate_coefficient(f, 0.0) == doctest::Approx(1.0));
    // quarter period of sin(10 pi x) is x = 1/20
    CHECK(evaluate_coefficient(f, 0.05) == doctest::Approx(1.75));
}

TEST_CASE("periodic field wraps and interpolates")
{
    const CoefficientField f = PeriodicField{1.0, {1.0, 0.0, 1.0}};
    CHECK(evaluate_coefficient(f, 1.5) == doctest::Approx(0.0));
    CHECK(evaluate_coefficient(f, 0.25) == doctest::Approx(0.5));
    CHECK(evaluate_coefficient(f, -0.5) == doctest::Approx(0.0));
}

TEST_CASE("periodicity holds for random offsets")
{
    const PeriodicField f{2.5, {0.3, 1.7, 0.9, 0.4, 0.3}};
    const CoefficientField cf = f;
    Lcg rng;
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-20.0, 20.0);
        CHECK(evaluate_coefficient(cf, x) ==
              doctest::Approx(evaluate_coefficient(cf, x + f.period)).epsilon(1e-12));
    }
}

TEST_CASE("reaction terms at the symmetric LV examples")
{
    const ModelSpec spec = ModelSpec::symmetric_lv(2.0, 1.0);
    const Reaction at_steady = reaction_terms(spec, 1.0, 0.0, 0.0);
    CHECK(at_steady.fu == 0.0);
    CHECK(at_steady.fv == 0.0);

    const Reaction mid = reaction_terms(spec, 0.5, 0.5, 0.0);
    CHECK(mid.fu == doctest::Approx(-0.25));
    CHECK(mid.fv == doctest::Approx(-0.25));
}

TEST_CASE("cubic reaction at (1,1)")
{
    ModelSpec spec;
    spec.kind = CompetitionKind::Cubic;
    const Reaction r = reaction_terms(spec, 1.0, 1.0, 0.0);
    CHECK(r.fu == doctest::Approx(-1.0));
    CHECK(r.fv == doctest::Approx(-1.0));
}

TEST_CASE("reaction vanishes at the three relevant steady states")
{
    for (double k : {1.2, 2.0, 5.0, 20.0}) {
        for (double h : {1.0, k, 3.0}) {
            ModelSpec lv = ModelSpec::symmetric_lv(k, 1.0);
            lv.h = h;
            ModelSpec cubic = lv;
            cubic.kind = CompetitionKind::Cubic;
            for (const auto& spec : {lv, cubic}) {
                for (auto [u, v] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
                    const Reaction r = reaction_terms(spec, u, v, 0.3);
                    CHECK(r.fu == 0.0);
                    CHECK(r.fv == 0.0);
                }
            }
        }
    }
}

TEST_CASE("symmetric LV reaction commutes with the species swap")
{
    Lcg rng;
    for (double k : {1.5, 2.0, 7.0}) {
        const ModelSpec spec = ModelSpec::symmetric_lv(k, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double u = rng.uniform(0.0, 1.5);
            const double v = rng.uniform(0.0, 1.5);
            const Reaction fwd = reaction_terms(spec, u, v, 0.0);
            const Reaction swapped = reaction_terms(spec, v, u, 0.0);
            CHECK(fwd.fu == doctest::Approx(swapped.fv).epsilon(1e-14));
            CHECK(fwd.fv == doctest::Approx(swapped.fu).epsilon(1e-14));
        }
    }
}

TEST_CASE("grid construction checks its invariants")
{
    const Grid1D g = Grid1D::make(40.0, 0.02);
    CHECK(g.n == 2001);
    CHECK(g.dx * (g.n - 1) == doctest::Approx(40.0).epsilon(1e-13));
    CHECK_THROWS_AS(Grid1D::make(0.1, 0.02), std::invalid_argument);  // fewer than 8 nodes
    CHECK_THROWS_AS(Grid1D::make(-1.0, 0.02), std::invalid_argument);
}

TEST_CASE("model validation rejects bad parameters")
{
    ModelSpec spec = ModelSpec::symmetric_lv(2.0, 4.0);
    CHECK_NOTHROW(spec.validate());
    spec.alpha = 0.9;
    spec.kind = CompetitionKind::Cubic;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.kind = CompetitionKind::LotkaVolterra;
    CHECK_NOTHROW(spec.validate());
    spec.r = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
