#include <doctest.h>

#include <string>
#include <variant>

#include "wavespeed/config.hpp"

using namespace wavespeed;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal config fills protocol defaults")
{
    const RunConfig cfg = parse_config(R"({"command":"speed","model":{"k":2,"d":4}})");
    CHECK(cfg.command == "speed");
    CHECK(cfg.model.k == 2.0);
    CHECK(std::get<ConstantField>(cfg.model.d_v).value == 4.0);
    CHECK(std::get<ConstantField>(cfg.model.d_u).value == 1.0);
    CHECK(cfg.model.h == 2.0);  // symmetric shorthand: h defaults to k
    CHECK(cfg.model.r == 1.0);
    CHECK(cfg.grid.length == doctest::Approx(40.0));
    CHECK(cfg.grid.dx == doctest::Approx(0.02));
    CHECK(cfg.stepper.dt == doctest::Approx(0.02));
    CHECK(cfg.run.window_start == doctest::Approx(32.0));
    CHECK(cfg.run.window_end == doctest::Approx(40.0));
    CHECK_FALSE(cfg.plan.has_value());
    CHECK(cfg.contour_levels.size() == 13);
    CHECK(cfg.contour_levels.front() == doctest::Approx(0.0));
    CHECK(cfg.contour_levels.back() == doctest::Approx(-1.2));
}

TEST_CASE("sweep command defaults its plan")
{
    const RunConfig cfg = parse_config(R"({"command":"sweep"})");
    REQUIRE(cfg.plan.has_value());
    CHECK(cfg.plan->d.count() == 41);
    CHECK(cfg.plan->k.count() == 41);
    CHECK(cfg.plan->appendix_protocol);
}

TEST_CASE("errors carry the offending field path")
{
    CHECK(error_of(R"({"model":{"k":2}})").find("command") != std::string::npos);
    CHECK(error_of(R"({"command":"speed","model":{"k":2},"grid":{"dx":0}})").find("grid.dx") !=
          std::string::npos);
    CHECK(error_of(R"({"command":"speed","model":{"k":2,"bogus":1}})").find("bogus") !=
          std::string::npos);
    CHECK(error_of(R"({"command":"speed","model":{"k":2},"extra":{}})").find("extra") !=
          std::string::npos);
    CHECK(error_of(R"({"command":"fly","model":{"k":2}})").find("command") != std::string::npos);
    CHECK(error_of(R"({"command":"speed","model":{"k":2,"d":4,"d_v":4}})").find("d_v") !=
          std::string::npos);
    CHECK(error_of(R"({"command":"speed","model":{"k":2},"run":{"window":[40,32]}})")
              .find("window") != std::string::npos);
    CHECK(error_of("not json at all").find("invalid JSON") != std::string::npos);
    CHECK(error_of(R"({"command":"scenario","model":{"k":2}})").find("scenario") !=
          std::string::npos);
}

TEST_CASE("coefficient fields parse from shorthand and objects")
{
    const RunConfig cfg = parse_config(R"({
        "command": "simulate",
        "model": {"k": 2,
                  "d_v": {"type": "sine", "mean": 1, "amplitude": 0.75, "frequency": 3},
                  "mu": {"type": "periodic", "period": 2, "values": [1, 0, 1]},
                  "a": 1.5}
    })");
    const auto& dv = std::get<SineField>(cfg.model.d_v);
    CHECK(dv.amplitude == 0.75);
    CHECK(dv.frequency == 3);
    const auto& mu = std::get<PeriodicField>(cfg.model.mu);
    CHECK(mu.period == 2.0);
    CHECK(mu.values.size() == 3);
    CHECK(std::get<ConstantField>(cfg.model.a).value == 1.5);

    CHECK(error_of(R"({"command":"speed","model":{"k":2,"mu":{"type":"spline"}}})")
              .find("mu.type") != std::string::npos);
    CHECK(error_of(R"({"command":"speed","model":{"k":2,"mu":{"type":"periodic","period":1,"values":[1]}}})")
              .find("mu.values") != std::string::npos);
}

TEST_CASE("serialize and parse round trip")
{
    RunConfig cfg = parse_config(R"({
        "command": "sweep",
        "model": {"k": 3, "d": 2, "alpha": 0.9},
        "grid": {"length": 80, "dx": 0.01},
        "stepper": {"dt": 0.01},
        "run": {"t_final": 50, "window": [40, 50]},
        "plan": {"d": {"min": 1, "max": 5, "step": 1}, "k": {"min": 1, "max": 3, "step": 0.5}},
        "contour_levels": [0, -0.5],
        "output_dir": "results",
        "scenario": {"name": "cubic_sign_law", "r": 1, "h": 1, "k": 2, "d": 3}
    })");
    const RunConfig again = parse_config(serialize_config(cfg));
    CHECK(serialize_config(again) == serialize_config(cfg));
    CHECK(again.model.alpha == cfg.model.alpha);
    CHECK(again.plan->hash() == cfg.plan->hash());
    CHECK(again.grid.n == cfg.grid.n);
    REQUIRE(again.scenario.has_value());
    CHECK(again.scenario->name == "cubic_sign_law");
    CHECK(again.scenario->params.at("d").get<double>() == 3.0);
}

TEST_CASE("coefficient field json round trips")
{
    for (const CoefficientField& f :
         {CoefficientField{ConstantField{2.5}}, CoefficientField{SineField{1.0, 0.75, 4}},
          CoefficientField{PeriodicField{3.0, {0.1, 0.9, 0.1}}}}) {
        const CoefficientField back = field_from_json(field_to_json(f), "field");
        CHECK(field_to_json(back) == field_to_json(f));
    }
}
