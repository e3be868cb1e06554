#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wavespeed {

struct AnchorResult {
    std::string id;
    std::string description;
    double measured = 0.0;
    double expected_lo = 0.0;  // pass iff measured in (lo, hi) / [target +- tol]
    double expected_hi = 0.0;
    bool equality = false;     // expected_lo/hi derived from target +- tol
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// The catalog of exact values, sign regions and limit brackets for the
// bistable wave speed, each measured under the appendix protocol. `only`
// filters by id prefix; tolerance_override tightens equality rows.
std::vector<AnchorResult> run_anchor_suite(const std::string& only = "",
                                           double tolerance_override = 0.0);

void print_anchor_table(const std::vector<AnchorResult>& rows, std::ostream& out);
bool all_passed(const std::vector<AnchorResult>& rows);

}  // namespace wavespeed
