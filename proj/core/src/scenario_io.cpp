#include "tdoa/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tdoa/errors.hpp"

namespace tdoa {
namespace {

using nlohmann::json;

Vector read_vector(const json& j, const char* field, std::size_t expected) {
  if (!j.is_array()) throw ScenarioError(std::string("scenario: ") + field + " must be an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ScenarioError(std::string("scenario: ") + field + " must be numeric");
    v.push_back(e.get<double>());
  }
  if (expected != 0 && v.size() != expected)
    throw ScenarioError(std::string("scenario: ") + field + " has the wrong length");
  return v;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario: top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw ScenarioError("scenario: missing integer field 'dim'");
  const int dim = doc["dim"].get<int>();
  if (dim != 2 && dim != 3) throw ScenarioError("scenario: 'dim' must be 2 or 3");
  if (!doc.contains("reference") || !doc.contains("sensors"))
    throw ScenarioError("scenario: 'reference' and 'sensors' are required");

  const Vector reference = read_vector(doc["reference"], "reference", dim);
  if (!doc["sensors"].is_array() || doc["sensors"].empty())
    throw ScenarioError("scenario: 'sensors' must be a non-empty array of coordinates");
  std::vector<Vector> sensors;
  for (const auto& s : doc["sensors"]) sensors.push_back(read_vector(s, "sensors", dim));

  ScenarioFile out{SensorArray(reference, std::move(sensors)), {}, {}, {}, {}};
  if (doc.contains("source")) out.source = read_vector(doc["source"], "source", dim);
  if (doc.contains("measurements"))
    out.measurements = read_vector(doc["measurements"], "measurements", out.array.count());
  if (doc.contains("sigma")) {
    if (!doc["sigma"].is_number()) throw ScenarioError("scenario: 'sigma' must be numeric");
    out.sigma = doc["sigma"].get<double>();
    if (*out.sigma < 0.0) throw ScenarioError("scenario: 'sigma' must be nonnegative");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) throw ScenarioError("scenario: 'seed' must be an integer");
    out.seed = doc["seed"].get<std::uint64_t>();
  }
  return out;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("scenario: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioFile& scenario) {
  json doc;
  doc["dim"] = scenario.array.dim();
  doc["reference"] = scenario.array.reference();
  json sensors = json::array();
  for (std::size_t i = 0; i < scenario.array.count(); ++i) sensors.push_back(scenario.array.sensor(i));
  doc["sensors"] = std::move(sensors);
  if (scenario.source) doc["source"] = *scenario.source;
  if (scenario.measurements) doc["measurements"] = *scenario.measurements;
  return doc.dump(2) + "\n";
}

RangeDiffSet resolve_measurements(const ScenarioFile& scenario,
                                  std::optional<std::uint64_t> seed_override) {
  const std::optional<std::uint64_t> seed = seed_override ? seed_override : scenario.seed;
  const bool can_simulate = scenario.source && scenario.sigma && seed;
  if (scenario.measurements && can_simulate)
    throw ScenarioError(
        "scenario: give either 'measurements' or ('source' + 'sigma' + 'seed'), not both");
  if (scenario.measurements) {
    RangeDiffSet meas;
    meas.values = *scenario.measurements;
    meas.provenance = RangeDiffSet::Provenance::Measured;
    return meas;
  }
  if (!can_simulate)
    throw ScenarioError(
        "scenario: need 'measurements' or a complete ('source', 'sigma', 'seed') triple");
  return simulate_measurements(scenario.array, *scenario.source, *scenario.sigma, *seed);
}

}  // namespace tdoa
