#pragma once

#include <optional>
#include <string>

#include "wold/spec_io.hpp"
#include "wold/wold.hpp"

namespace wold {

struct RunOptions {
    std::string action = "decompose"; // check | decompose | verify
    std::string format = "json";      // json | text
    bool interior_only = false;
    int depth_override = -1;
    int max_power_override = -1;
    double tol_override = -1.0;
    bool with_timing = true;
};

struct RunResult {
    int exit_code = 0;  // 0 hypotheses pass, 2 hypotheses fail (report still emitted)
    std::string report; // rendered document
};

/// Runs the requested pipeline on a parsed spec. Deterministic given the spec
/// and options: fixed iteration orders, no randomness; only the trailing
/// timing field varies between runs.
RunResult run_spec(const TupleSpec& spec, const RunOptions& opts);

} // namespace wold
