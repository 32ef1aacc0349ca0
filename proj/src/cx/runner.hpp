#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cx/report.hpp"

namespace cxr {

/// Result of one configured run: a summary (echoing the effective config),
/// named CSV/JSON artifacts, and the pass/violation flag.
struct RunOutcome {
    Json summary;
    std::vector<std::pair<std::string, std::string>> files;  // name -> contents
    bool violations_found = false;
};

/// Execute a config of the form
///   {"command": <name>, "seed": ..., "curve": {...}, "params": {...}}
/// Commands: decompose, verify-jacobian-monomial, verify-jacobian-d3,
/// verify-torsion, verify-sublevel, verify-weight-growth,
/// verify-weight-optimality, extension-scan, selftest.
/// Throws ParseError / std::invalid_argument on bad configs.
RunOutcome run_config(const Json& config);

}  // namespace cxr
