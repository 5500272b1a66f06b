// Scenario files: a small JSON schema binding the system, geometry, sweep,
// and output settings used by the command-line driver.  Parsing is strict:
// unknown sections or keys are rejected so that a typo cannot silently fall
// back to a default.
#pragma once

#include <string>
#include <vector>

#include "harvest/configs.hpp"
#include "harvest/sweep.hpp"

namespace harvest {

struct OutputSpec {
  std::string path;            // empty = stdout
  bool full_precision = false; // false = 6 significant digits
};

struct ScenarioConfig {
  SystemParams system;         // defaults: T = 0.01, lambda = 1, Gaussian
  GeometryFamily geometry;     // defaults to the two-detector family
  std::vector<SweepAxis> axes; // sweep grid / refinement box
  bool refine = false;         // sweep subcommand: also refine the best row
  OutputSpec output;
};

// Parses a JSON document.  Throws std::invalid_argument naming the offending
// section/key for schema violations (unknown keys, wrong types, inconsistent
// switching parameters).
ScenarioConfig parse_scenario(const std::string& json_text);

// Reads and parses a file; std::runtime_error when unreadable.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace harvest
