#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracheat/gridfn.hpp"
#include "json.hpp"

namespace fracheat::harness {

using Json = nlohmann::json;

enum class Kind {
  norms,
  semigroup_rates,
  kernel_check,
  interp_check,
  hardy_check,
  solve,
  threshold,
  acceptance,
};

const char* to_string(Kind k);  // "semigroup-rates", ...
Kind kind_from_string(const std::string& name);

struct ExperimentConfig {
  std::string name;
  Kind kind = Kind::norms;
  gridfn::GridSpec grid{2, 4.0, 128};
  Json params = Json::object();
  std::uint64_t seed = 1;
  std::string output_dir = ".";
};

// Throws Error(invalid_argument) on unknown keys, kinds or malformed fields.
ExperimentConfig parse_config(const Json& doc);

// {"kind": "critical", "theta": 1, "p": 2, "scale": 1, "exponent": 0,
//  "support_radius": "inf"}; p defaults to N/(N - theta) for "critical".
// "delta" and "ball_radius" are handled by the experiment runner.
gridfn::SingularProfileSpec profile_from_json(const Json& j, int dim);

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 usage or configuration error, 2 assertion failure
  Json summary = Json::object();
  std::string message;
  std::vector<std::string> files;
};

RunOutcome run(const ExperimentConfig& cfg);

// Parses, merges `overrides` into the document (JSON merge patch) and runs.
// Parse and validation failures come back as exit code 1.
RunOutcome run_document(const std::string& config_json, const std::string& overrides_json);

}  // namespace fracheat::harness
