#include "wavespeed/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wavespeed {

using nlohmann::json;

namespace {

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&key](const char* a) { return key == a; }) == allowed.end())
            throw ConfigError(path + ": unknown key \"" + key + "\"");
    }
}

double get_number(const json& j, const std::string& path)
{
    if (!j.is_number())
        throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

double get_positive(const json& j, const std::string& path)
{
    const double v = get_number(j, path);
    if (v <= 0.0)
        throw ConfigError(path + " must be positive");
    return v;
}

}  // namespace

CoefficientField field_from_json(const json& j, const std::string& path)
{
    if (j.is_number())
        return ConstantField{j.get<double>()};
    if (!j.is_object())
        throw ConfigError(path + ": expected a number or a field object");
    const std::string type = j.value("type", "");
    if (type == "constant") {
        expect_keys(j, path, {"type", "value"});
        if (!j.contains("value"))
            throw ConfigError(path + ".value is required");
        return ConstantField{get_number(j.at("value"), path + ".value")};
    }
    if (type == "periodic") {
        expect_keys(j, path, {"type", "period", "values"});
        PeriodicField f;
        f.period = get_positive(j.at("period"), path + ".period");
        if (!j.contains("values") || !j.at("values").is_array() || j.at("values").size() < 2)
            throw ConfigError(path + ".values must be an array of at least 2 numbers");
        for (const auto& v : j.at("values"))
            f.values.push_back(get_number(v, path + ".values[]"));
        return f;
    }
    if (type == "sine") {
        expect_keys(j, path, {"type", "mean", "amplitude", "frequency"});
        SineField f;
        f.mean = get_number(j.value("mean", json(1.0)), path + ".mean");
        f.amplitude = get_number(j.value("amplitude", json(0.0)), path + ".amplitude");
        f.frequency = static_cast<int>(get_positive(j.value("frequency", json(1)), path + ".frequency"));
        return f;
    }
    throw ConfigError(path + ".type must be one of constant|periodic|sine");
}

json field_to_json(const CoefficientField& f)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantField>) {
                return json{{"type", "constant"}, {"value", v.value}};
            } else if constexpr (std::is_same_v<T, PeriodicField>) {
                return json{{"type", "periodic"}, {"period", v.period}, {"values", v.values}};
            } else {
                return json{{"type", "sine"},
                            {"mean", v.mean},
                            {"amplitude", v.amplitude},
                            {"frequency", v.frequency}};
            }
        },
        f);
}

namespace {

ModelSpec model_from_json(const json& j)
{
    expect_keys(j, "model",
                {"kind", "d", "d_u", "d_v", "r", "h", "k", "alpha", "mu", "a"});
    if (!j.contains("k"))
        throw ConfigError("model.k is required");
    const double k = get_number(j.at("k"), "model.k");

    ModelSpec spec = ModelSpec::symmetric_lv(k, 1.0);
    if (j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "lotka_volterra")
            spec.kind = CompetitionKind::LotkaVolterra;
        else if (kind == "cubic")
            spec.kind = CompetitionKind::Cubic;
        else
            throw ConfigError("model.kind must be lotka_volterra or cubic");
    }
    if (j.contains("d") && j.contains("d_v"))
        throw ConfigError("model: give either d or d_v, not both");
    if (j.contains("d"))
        spec.d_v = ConstantField{get_positive(j.at("d"), "model.d")};
    if (j.contains("d_v"))
        spec.d_v = field_from_json(j.at("d_v"), "model.d_v");
    if (j.contains("d_u"))
        spec.d_u = field_from_json(j.at("d_u"), "model.d_u");
    if (j.contains("r"))
        spec.r = get_positive(j.at("r"), "model.r");
    if (j.contains("h"))
        spec.h = get_number(j.at("h"), "model.h");
    if (j.contains("alpha"))
        spec.alpha = get_positive(j.at("alpha"), "model.alpha");
    if (j.contains("mu"))
        spec.mu = field_from_json(j.at("mu"), "model.mu");
    if (j.contains("a"))
        spec.a = field_from_json(j.at("a"), "model.a");
    spec.validate();
    return spec;
}

AxisRange axis_from_json(const json& j, const std::string& path)
{
    expect_keys(j, path, {"min", "max", "step"});
    AxisRange axis;
    if (!j.contains("min") || !j.contains("max") || !j.contains("step"))
        throw ConfigError(path + " needs min, max and step");
    axis.min = get_number(j.at("min"), path + ".min");
    axis.max = get_number(j.at("max"), path + ".max");
    axis.step = get_positive(j.at("step"), path + ".step");
    return axis;
}

SweepPlan plan_from_json(const json& j)
{
    expect_keys(j, "plan",
                {"d", "k", "appendix_protocol", "domain_length", "dx", "dt", "t_final",
                 "window", "checkpoint_interval"});
    SweepPlan plan;
    if (j.contains("d"))
        plan.d = axis_from_json(j.at("d"), "plan.d");
    if (j.contains("k"))
        plan.k = axis_from_json(j.at("k"), "plan.k");
    if (j.contains("appendix_protocol"))
        plan.appendix_protocol = j.at("appendix_protocol").get<bool>();
    if (j.contains("domain_length"))
        plan.domain_length = get_positive(j.at("domain_length"), "plan.domain_length");
    if (j.contains("dx"))
        plan.dx = get_positive(j.at("dx"), "plan.dx");
    if (j.contains("dt"))
        plan.dt = get_positive(j.at("dt"), "plan.dt");
    if (j.contains("t_final"))
        plan.t_final = get_positive(j.at("t_final"), "plan.t_final");
    if (j.contains("window")) {
        const auto& w = j.at("window");
        if (!w.is_array() || w.size() != 2)
            throw ConfigError("plan.window must be [t_start, t_end]");
        plan.window_start = get_number(w[0], "plan.window[0]");
        plan.window_end = get_number(w[1], "plan.window[1]");
    }
    if (j.contains("checkpoint_interval"))
        plan.checkpoint_interval =
            static_cast<int>(get_positive(j.at("checkpoint_interval"), "plan.checkpoint_interval"));
    plan.validate();
    return plan;
}

const std::set<std::string> kCommands = {"simulate", "speed", "sweep",
                                         "contour",  "validate", "scenario"};

}  // namespace

RunConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }

    expect_keys(j, "config",
                {"command", "model", "grid", "stepper", "run", "plan", "contour_levels",
                 "output_dir", "scenario", "only"});

    RunConfig cfg;
    if (!j.contains("command"))
        throw ConfigError("command is required");
    cfg.command = j.at("command").get<std::string>();
    if (!kCommands.count(cfg.command))
        throw ConfigError("command must be one of simulate|speed|sweep|contour|validate|scenario");

    if (j.contains("model"))
        cfg.model = model_from_json(j.at("model"));

    double length = 40.0, dx = 0.02;
    if (j.contains("grid")) {
        expect_keys(j.at("grid"), "grid", {"length", "dx"});
        if (j.at("grid").contains("length"))
            length = get_positive(j.at("grid").at("length"), "grid.length");
        if (j.at("grid").contains("dx"))
            dx = get_positive(j.at("grid").at("dx"), "grid.dx");
    }
    try {
        cfg.grid = Grid1D::make(length, dx);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }

    if (j.contains("stepper")) {
        expect_keys(j.at("stepper"), "stepper", {"dt", "rescaled"});
        if (j.at("stepper").contains("dt"))
            cfg.stepper.dt = get_positive(j.at("stepper").at("dt"), "stepper.dt");
        if (j.at("stepper").contains("rescaled"))
            cfg.stepper.rescaled = j.at("stepper").at("rescaled").get<bool>();
    }

    if (j.contains("run")) {
        const auto& r = j.at("run");
        expect_keys(r, "run",
                    {"t_final", "window", "level", "sample_interval", "snapshot_times"});
        if (r.contains("t_final"))
            cfg.run.t_final = get_positive(r.at("t_final"), "run.t_final");
        if (r.contains("window")) {
            const auto& w = r.at("window");
            if (!w.is_array() || w.size() != 2)
                throw ConfigError("run.window must be [t_start, t_end]");
            cfg.run.window_start = get_number(w[0], "run.window[0]");
            cfg.run.window_end = get_number(w[1], "run.window[1]");
        }
        if (r.contains("level"))
            cfg.run.level = get_number(r.at("level"), "run.level");
        if (r.contains("sample_interval"))
            cfg.run.sample_interval = get_positive(r.at("sample_interval"), "run.sample_interval");
        if (r.contains("snapshot_times"))
            for (const auto& t : r.at("snapshot_times"))
                cfg.run.snapshot_times.push_back(get_number(t, "run.snapshot_times[]"));
    }
    if (cfg.run.window_start >= cfg.run.window_end || cfg.run.window_end > cfg.run.t_final)
        throw ConfigError("run.window must lie inside [0, run.t_final]");

    if (j.contains("plan"))
        cfg.plan = plan_from_json(j.at("plan"));
    if ((cfg.command == "sweep" || cfg.command == "contour") && !cfg.plan)
        cfg.plan = SweepPlan{};  // appendix defaults at desk-scale steps

    if (j.contains("contour_levels"))
        for (const auto& v : j.at("contour_levels"))
            cfg.contour_levels.push_back(get_number(v, "contour_levels[]"));
    if (cfg.contour_levels.empty())
        for (int i = 0; i <= 12; ++i)
            cfg.contour_levels.push_back(-0.1 * i);

    if (j.contains("output_dir"))
        cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("only"))
        cfg.only = j.at("only").get<std::string>();

    if (j.contains("scenario")) {
        const auto& s = j.at("scenario");
        if (!s.is_object() || !s.contains("name"))
            throw ConfigError("scenario.name is required");
        ScenarioRequest request;
        request.name = s.at("name").get<std::string>();
        request.params = s;
        request.params.erase("name");
        cfg.scenario = std::move(request);
    }
    if (cfg.command == "scenario" && !cfg.scenario)
        throw ConfigError("command \"scenario\" requires a scenario section");

    return cfg;
}

std::string serialize_config(const RunConfig& cfg)
{
    json j;
    j["command"] = cfg.command;

    json model;
    model["kind"] =
        cfg.model.kind == CompetitionKind::LotkaVolterra ? "lotka_volterra" : "cubic";
    model["d_u"] = field_to_json(cfg.model.d_u);
    model["d_v"] = field_to_json(cfg.model.d_v);
    model["r"] = cfg.model.r;
    model["h"] = cfg.model.h;
    model["k"] = cfg.model.k;
    model["alpha"] = cfg.model.alpha;
    model["mu"] = field_to_json(cfg.model.mu);
    model["a"] = field_to_json(cfg.model.a);
    j["model"] = std::move(model);

    j["grid"] = {{"length", cfg.grid.length}, {"dx", cfg.grid.dx}};
    j["stepper"] = {{"dt", cfg.stepper.dt}, {"rescaled", cfg.stepper.rescaled}};
    j["run"] = {{"t_final", cfg.run.t_final},
                {"window", {cfg.run.window_start, cfg.run.window_end}},
                {"level", cfg.run.level},
                {"sample_interval", cfg.run.sample_interval},
                {"snapshot_times", cfg.run.snapshot_times}};
    if (cfg.plan) {
        j["plan"] = {{"d", {{"min", cfg.plan->d.min}, {"max", cfg.plan->d.max}, {"step", cfg.plan->d.step}}},
                     {"k", {{"min", cfg.plan->k.min}, {"max", cfg.plan->k.max}, {"step", cfg.plan->k.step}}},
                     {"appendix_protocol", cfg.plan->appendix_protocol},
                     {"domain_length", cfg.plan->domain_length},
                     {"dx", cfg.plan->dx},
                     {"dt", cfg.plan->dt},
                     {"t_final", cfg.plan->t_final},
                     {"window", {cfg.plan->window_start, cfg.plan->window_end}},
                     {"checkpoint_interval", cfg.plan->checkpoint_interval}};
    }
    j["contour_levels"] = cfg.contour_levels;
    j["output_dir"] = cfg.output_dir;
    if (!cfg.only.empty())
        j["only"] = cfg.only;
    if (cfg.scenario) {
        json s = cfg.scenario->params;
        s["name"] = cfg.scenario->name;
        j["scenario"] = std::move(s);
    }
    return j.dump(2);
}

}  // namespace wavespeed
