#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tdoa/geometry.hpp"

namespace tdoa {

// On-disk scenario: geometry plus either recorded measurements or the
// ingredients for simulating them. Schema (UTF-8 JSON):
//   {"dim": n, "reference": [..], "sensors": [[..], ..],
//    "source": [..]?, "measurements": [..]?, "sigma": s?, "seed": k?}
struct ScenarioFile {
  SensorArray array;
  std::optional<Vector> source;
  std::optional<Vector> measurements;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
};

// Throw ScenarioError on parse failures or schema violations.
ScenarioFile parse_scenario(const std::string& json_text);
ScenarioFile load_scenario(const std::string& path);

// Serializes geometry, measurements, and the true source when present.
// Simulation parameters are not round-tripped: the output is meant to be
// solvable as-is, and a solve accepts exactly one measurement origin.
std::string scenario_to_json(const ScenarioFile& scenario);

// Applies the exactly-one rule: recorded measurements, or a complete
// (source, sigma, seed) triple with the seed optionally overridden.
RangeDiffSet resolve_measurements(const ScenarioFile& scenario,
                                  std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace tdoa
