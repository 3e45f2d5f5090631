#pragma once

// Run configuration: one flat JSON object whose keys carry their units.

#include <cstdint>
#include <string>
#include <vector>

#include "slip/errors.hpp"
#include "slip/gait.hpp"

namespace slip {

/// Missing, unknown or ill-typed keys and invariant violations. The message
/// starts with the offending key path.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RunConfig {
  GaitSetup setup;
  FlightState initial;  // defaults to the apex (0, apex_des) at v_des
  int n_steps = 10;
  std::vector<double> noise_levels{0.0, 0.05, 0.10};
  int n_seeds = 50;
  int sweep_steps = 20;
  double return_map_delta = 1e-5;

  bool operator==(const RunConfig& other) const;
};

RunConfig parse_config_text(const std::string& text);

/// Reads and parses a file. Throws ConfigError when it cannot be read.
RunConfig parse_config(const std::string& path);

/// Every key with its effective value, sorted, as a JSON object. Parsing the
/// echo reproduces the same RunConfig.
std::string echo_config(const RunConfig& cfg, int indent = 2);

/// Required key names in the order they are reported.
const std::vector<std::string>& required_config_keys();

}  // namespace slip
