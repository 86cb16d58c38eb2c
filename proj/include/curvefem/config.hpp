#pragma once

#include <string>
#include <vector>

#include "curvefem/lift.hpp"

namespace cfem {

/// Parameters of a `study` run. Parsed from a TOML file and/or CLI flags;
/// flags override file values. Fully deterministic (no seeds).
struct StudyConfig {
  std::string problem = "ventcel-disk";
  std::vector<int> r_list = {1, 2, 3};
  std::vector<int> k_list = {1, 2, 3, 4};
  int levels = 4;
  LiftVariant lift = LiftVariant::Modified;
  std::string output_dir = ".";
  std::string format = "markdown"; // stdout table format: csv | markdown

  void validate() const; // throws ConfigError
};

/// Flat TOML subset: `key = value` lines with quoted strings, integers and
/// integer arrays; '#' comments. Recognized keys: problem, r, k, levels,
/// lift, out, format.
StudyConfig parse_toml_config(const std::string& path);

} // namespace cfem
