#pragma once

#include <string>
#include <vector>

#include "catline/config.hpp"

namespace catline {

struct ScenarioResult {
  std::vector<std::string> files;  // artifacts written, in order
  bool converged = true;           // false only for a non-converged classify
};

/// Execute one scenario and write its artifacts under config.run.out_dir.
/// Every output carries a '#'-prefixed header block with the tool version
/// and the fully resolved configuration.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace catline
