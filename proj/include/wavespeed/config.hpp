#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavespeed/model.hpp"
#include "wavespeed/stepper.hpp"
#include "wavespeed/sweep.hpp"

namespace wavespeed {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunParams {
    double t_final = 40.0;
    double window_start = 32.0;
    double window_end = 40.0;
    double level = 0.5;
    double sample_interval = 0.5;
    std::vector<double> snapshot_times;
};

struct ScenarioRequest {
    std::string name;
    nlohmann::json params;  // scenario-specific, validated at dispatch
};

struct RunConfig {
    std::string command;  // simulate | speed | sweep | contour | validate | scenario
    ModelSpec model = ModelSpec::symmetric_lv(2.0, 1.0);
    Grid1D grid = Grid1D::make(40.0, 0.02);
    StepperConfig stepper;
    RunParams run;
    std::optional<SweepPlan> plan;
    std::vector<double> contour_levels;
    std::string output_dir = "out";
    std::optional<ScenarioRequest> scenario;
    std::string only;  // anchor filter for the validate command
};

// Strict parse: unknown keys are rejected, violations name the field path,
// unset fields take the appendix-protocol defaults.
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);

nlohmann::json field_to_json(const CoefficientField& f);
CoefficientField field_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace wavespeed
