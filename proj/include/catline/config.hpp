#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "catline/classifier.hpp"
#include "catline/collision.hpp"
#include "catline/dynamics.hpp"

namespace catline {

enum class Scenario { Stabilize, Ramp, Homogenize, Classify };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct RunSettings {
  int dim = 0;  // resolved truncation dimension ("auto" resolves at parse)
  double t_final = 0.0;
  double dt = 0.0;
  int record_every = 100;
  int window = 200;
  double tol = 1e-3;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  bool operator==(const RunSettings&) const = default;
};

/// A fully resolved scenario description: every default made explicit.
struct ScenarioConfig {
  Scenario scenario = Scenario::Stabilize;
  SystemParams system;
  DriveSchedule drive;
  CollisionParams collision;
  RunSettings run;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parse the sectioned key-value format ([system], [drive], [collision],
/// [run]; lower_snake_case keys; decimal literals, booleans, quoted strings
/// and comma lists; '#' comments). Unknown keys and sections are errors.
/// The scenario comes from the [run] section or, when absent, from
/// `scenario_override`.
ScenarioConfig parse_config(const std::string& text,
                            std::optional<Scenario> scenario_override = {});

ScenarioConfig load_config(const std::string& path,
                           std::optional<Scenario> scenario_override = {});

/// Re-run all cross-field validation (after CLI overrides).
void validate_config(const ScenarioConfig& config);

/// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& config);

}  // namespace catline
