#pragma once

#include "ssobs/scenario.hpp"
#include "ssobs/trace.hpp"

namespace ssobs {

/// Simulates the plant of `cfg` and runs the estimator selected by
/// `cfg.mode`. Throws std::invalid_argument when validate_scenario reports
/// violations.
RunResult run_scenario(const ScenarioConfig& cfg);

}  // namespace ssobs
