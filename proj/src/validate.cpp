#include "wavespeed/validate.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

#include "wavespeed/scenarios.hpp"
#include "wavespeed/stepper.hpp"
#include "wavespeed/sweep.hpp"

namespace wavespeed {

namespace {

double protocol_speed(double k, double d)
{
    SweepPlan plan;
    plan.dt = suggested_dt(ModelSpec::symmetric_lv(k, d), plan.dt);
    return run_single(d, k, plan).speed;
}

struct Collector {
    std::vector<AnchorResult> rows;
    std::string only;
    double tol_override;

    bool wanted(const std::string& id) const
    {
        return only.empty() || id.rfind(only, 0) == 0 || only.rfind(id, 0) == 0;
    }

    void equality(const std::string& id, const std::string& desc, double measured, double target,
                  double tol)
    {
        if (!wanted(id))
            return;
        AnchorResult r;
        r.id = id;
        r.description = desc;
        r.measured = measured;
        r.equality = true;
        r.target = target;
        r.tolerance = tol_override > 0.0 ? tol_override : tol;
        r.expected_lo = r.target - r.tolerance;
        r.expected_hi = r.target + r.tolerance;
        r.pass = std::isfinite(measured) && std::abs(measured - target) <= r.tolerance;
        rows.push_back(std::move(r));
    }

    void interval(const std::string& id, const std::string& desc, double measured, double lo,
                  double hi)
    {
        if (!wanted(id))
            return;
        AnchorResult r;
        r.id = id;
        r.description = desc;
        r.measured = measured;
        r.expected_lo = lo;
        r.expected_hi = hi;
        r.pass = std::isfinite(measured) && measured > lo && measured < hi;
        rows.push_back(std::move(r));
    }
};

}  // namespace

std::vector<AnchorResult> run_anchor_suite(const std::string& only, double tolerance_override)
{
    Collector c;
    c.only = only;
    c.tol_override = tolerance_override;
    char id[64], desc[128];

    if (c.wanted("zero-speed")) {
        for (double k : {1.5, 2.0, 5.0, 10.0}) {
            std::snprintf(id, sizeof(id), "zero-speed-k%g", k);
            std::snprintf(desc, sizeof(desc), "c(k=%g, d=1) = 0", k);
            c.equality(id, desc, protocol_speed(k, 1.0), 0.0, 1e-3);
        }
    }

    if (c.wanted("rodrigo-mimura")) {
        c.equality("rodrigo-mimura", "c(11/6, 11/2) = -sqrt(6)/12",
                   protocol_speed(11.0 / 6.0, 11.0 / 2.0), -std::sqrt(6.0) / 12.0, 0.02);
    }

    if (c.wanted("guo-lin")) {
        for (double k : {1.25, 1.30, 4.0 / 3.0}) {
            std::snprintf(id, sizeof(id), "guo-lin-k%.3f", k);
            std::snprintf(desc, sizeof(desc), "c(k=%.3f, d=4) < 0", k);
            c.interval(id, desc, protocol_speed(k, 4.0), -10.0, -1e-3);
        }
    }

    if (c.wanted("ma-huang-ou")) {
        // k = 1.8: the negative-speed intervals are (4, 2k/(k-1)) and
        // (2k/(k-1), 4/(k-1)) = (4, 4.5) and (4.5, 5); samples strictly inside.
        const double k = 1.8;
        for (double d : {4.2, 4.4, 4.7, 4.9}) {
            std::snprintf(id, sizeof(id), "ma-huang-ou-d%.1f", d);
            std::snprintf(desc, sizeof(desc), "c(k=1.8, d=%.1f) < 0", d);
            c.interval(id, desc, protocol_speed(k, d), -10.0, -1e-3);
        }
    }

    if (c.wanted("large-d")) {
        const double speed = protocol_speed(2.0, 100.0);
        c.interval("large-d", "c(2, 100)/sqrt(100) in (-2, 0)", speed / 10.0, -2.0, 0.0);
    }

    if (c.wanted("large-k")) {
        c.interval("large-k", "c(500, 4) in (-2*sqrt(4), 0)", protocol_speed(500.0, 4.0), -4.0,
                   0.0);
    }

    if (c.wanted("cubic-sign")) {
        const ScenarioOutcome pos = scenario_cubic_sign_law(1.0, 1.0, 2.0, 3.0);
        c.interval("cubic-sign-positive", "cubic speed > 0 when k - rh > 0",
                   pos.measured.at("speed"), 1e-3, 10.0);
        const ScenarioOutcome neg = scenario_cubic_sign_law(2.0, 1.0, 1.0, 3.0);
        c.interval("cubic-sign-negative", "cubic speed < 0 when k - rh < 0",
                   neg.measured.at("speed"), -10.0, -1e-3);
        const ScenarioOutcome zero = scenario_cubic_sign_law(1.0, 1.5, 1.5, 2.0);
        c.equality("cubic-sign-zero", "cubic speed = 0 when k = rh", zero.measured.at("speed"),
                   0.0, 1e-3);
    }

    if (c.wanted("symmetry")) {
        for (auto [k, d] : {std::pair{2.0, 4.0}, std::pair{3.0, 9.0}}) {
            const double forward = protocol_speed(k, d);
            // Un-rescaled run at diffusion ratio 1/d.
            ScenarioConfig cfg;
            const ScenarioOutcome probe = scenario_asymptotic_probes(
                {AsymptoticProbe{k, 1.0 / d, -10.0, 10.0, false}}, cfg)[0];
            const double mirrored = -std::sqrt(d) * probe.measured.at("speed");
            std::snprintf(id, sizeof(id), "symmetry-k%g-d%g", k, d);
            std::snprintf(desc, sizeof(desc), "c(%g,%g) = -sqrt(%g) c(%g,1/%g)", k, d, d, k, d);
            c.equality(id, desc, forward, mirrored, 0.02);
        }
    }

    return c.rows;
}

void print_anchor_table(const std::vector<AnchorResult>& rows, std::ostream& out)
{
    char line[256];
    for (const auto& r : rows) {
        std::string expected;
        char buf[80];
        if (r.equality)
            std::snprintf(buf, sizeof(buf), "%.5g +- %.3g", r.target, r.tolerance);
        else
            std::snprintf(buf, sizeof(buf), "(%.4g, %.4g)", r.expected_lo, r.expected_hi);
        expected = buf;
        std::snprintf(line, sizeof(line), "%-22s %-10s measured=%-12.5g expected=%-20s %s\n",
                      r.id.c_str(), r.pass ? "[PASS]" : "[FAIL]", r.measured, expected.c_str(),
                      r.description.c_str());
        out << line;
    }
}

bool all_passed(const std::vector<AnchorResult>& rows)
{
    for (const auto& r : rows)
        if (!r.pass)
            return false;
    return !rows.empty();
}

}  // namespace wavespeed
