#include "slip/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace slip {

namespace {

using nlohmann::json;

struct KeyDef {
  std::string name;
  bool required;
  std::string invariant;  // field tag used in validation messages, empty if none
  std::function<void(const json&, RunConfig&)> read;
  std::function<json(const RunConfig&)> write;
};

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + ": expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
    throw ConfigError(key + ": integer out of range");
  return static_cast<int>(i);
}

KeyDef number(std::string name, bool required, std::string invariant,
              std::function<double&(RunConfig&)> field) {
  KeyDef d;
  d.name = name;
  d.required = required;
  d.invariant = std::move(invariant);
  d.read = [name, field](const json& v, RunConfig& c) { field(c) = as_number(v, name); };
  d.write = [field](const RunConfig& c) { return json(field(const_cast<RunConfig&>(c))); };
  return d;
}

KeyDef integer(std::string name, std::string invariant, std::function<int&(RunConfig&)> field) {
  KeyDef d;
  d.name = name;
  d.required = false;
  d.invariant = std::move(invariant);
  d.read = [name, field](const json& v, RunConfig& c) { field(c) = as_int(v, name); };
  d.write = [field](const RunConfig& c) { return json(field(const_cast<RunConfig&>(c))); };
  return d;
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back(number("mass_kg", true, "ModelParams.m ", [](RunConfig& c) -> double& { return c.setup.model.mass; }));
    t.push_back(number("stiffness_n_per_m", true, "ModelParams.k ", [](RunConfig& c) -> double& { return c.setup.model.stiffness; }));
    t.push_back(number("rest_length_m", true, "ModelParams.r0 ", [](RunConfig& c) -> double& { return c.setup.model.rest_length; }));
    t.push_back(number("damping_n_s_per_m", true, "ModelParams.damping", [](RunConfig& c) -> double& { return c.setup.model.damping; }));
    t.push_back(number("gravity_m_per_s2", true, "ModelParams.g ", [](RunConfig& c) -> double& { return c.setup.model.gravity; }));
    t.push_back(number("desired_velocity_m_per_s", true, "GaitCommand.v_des", [](RunConfig& c) -> double& { return c.setup.command.v_des; }));
    t.push_back(number("desired_apex_m", true, "GaitCommand.apex_des", [](RunConfig& c) -> double& { return c.setup.command.apex_des; }));
    t.push_back(number("attack_angle_rad", true, "attack_angle", [](RunConfig& c) -> double& { return c.setup.command.attack_angle; }));

    t.push_back(number("servo_time_constant_s", false, "ServoConfig.time_constant", [](RunConfig& c) -> double& { return c.setup.servo.time_constant; }));
    t.push_back(number("servo_velocity_gain_rad_s_per_m", false, "ServoConfig.velocity_gain", [](RunConfig& c) -> double& { return c.setup.servo.velocity_gain; }));

    t.push_back(number("touchdown_noise_fraction", false, "NoiseConfig.touchdown", [](RunConfig& c) -> double& { return c.setup.noise.touchdown_noise_fraction; }));
    t.push_back(number("liftoff_noise_fraction", false, "NoiseConfig.liftoff", [](RunConfig& c) -> double& { return c.setup.noise.liftoff_noise_fraction; }));
    {
      KeyDef d;
      d.name = "seed";
      d.required = false;
      d.read = [](const json& v, RunConfig& c) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
          throw ConfigError("seed: expected a non-negative integer");
        c.setup.noise.seed = v.get<std::uint64_t>();
      };
      d.write = [](const RunConfig& c) { return json(c.setup.noise.seed); };
      t.push_back(d);
    }
    {
      KeyDef d;
      d.name = "noise_distribution";
      d.required = false;
      d.read = [](const json& v, RunConfig& c) {
        if (!v.is_string() || v.get<std::string>() != "uniform_symmetric")
          throw ConfigError("noise_distribution: expected \"uniform_symmetric\"");
        c.setup.noise.distribution = NoiseDistribution::UniformSymmetric;
      };
      d.write = [](const RunConfig&) { return json("uniform_symmetric"); };
      t.push_back(d);
    }

    t.push_back(number("step_size_s", false, "IntegratorConfig.h ", [](RunConfig& c) -> double& { return c.setup.integrator.step_size; }));
    t.push_back(number("event_tolerance", false, "IntegratorConfig.event_tolerance", [](RunConfig& c) -> double& { return c.setup.integrator.event_tolerance; }));
    t.push_back(integer("max_bisection_iters", "IntegratorConfig.max_bisection_iters", [](RunConfig& c) -> int& { return c.setup.integrator.max_bisection_iters; }));
    t.push_back(number("horizon_s", false, "IntegratorConfig.horizon", [](RunConfig& c) -> double& { return c.setup.integrator.horizon; }));

    t.push_back(number("eta1_per_s", false, "ControllerConfig.eta", [](RunConfig& c) -> double& { return c.setup.controller.eta1; }));
    t.push_back(number("eta2_per_s", false, "ControllerConfig.eta", [](RunConfig& c) -> double& { return c.setup.controller.eta2; }));
    {
      KeyDef d;
      d.name = "observer_poles_per_s";
      d.required = false;
      d.invariant = "ControllerConfig.observer_poles";
      d.read = [](const json& v, RunConfig& c) {
        if (!v.is_array() || v.size() != 4)
          throw ConfigError("observer_poles_per_s: expected an array of 4 numbers");
        for (std::size_t i = 0; i < 4; ++i)
          c.setup.controller.observer_poles[i] =
              as_number(v[i], "observer_poles_per_s[" + std::to_string(i) + "]");
      };
      d.write = [](const RunConfig& c) { return json(c.setup.controller.observer_poles); };
      t.push_back(d);
    }
    t.push_back(number("actuator_limit_m_per_s", false, "ControllerConfig.actuator_limit", [](RunConfig& c) -> double& { return c.setup.controller.actuator_limit; }));
    t.push_back(number("crush_fraction", false, "ControllerConfig.crush_fraction", [](RunConfig& c) -> double& { return c.setup.controller.crush_fraction; }));
    {
      KeyDef d;
      d.name = "controller_enabled";
      d.required = false;
      d.read = [](const json& v, RunConfig& c) {
        if (!v.is_boolean()) throw ConfigError("controller_enabled: expected true or false");
        c.setup.controller.enabled = v.get<bool>();
      };
      d.write = [](const RunConfig& c) { return json(c.setup.controller.enabled); };
      t.push_back(d);
    }

    t.push_back(number("initial_x_m", false, "", [](RunConfig& c) -> double& { return c.initial.x; }));
    t.push_back(number("initial_y_m", false, "initial_y", [](RunConfig& c) -> double& { return c.initial.y; }));
    t.push_back(number("initial_vx_m_per_s", false, "", [](RunConfig& c) -> double& { return c.initial.vx; }));
    t.push_back(number("initial_vy_m_per_s", false, "", [](RunConfig& c) -> double& { return c.initial.vy; }));

    t.push_back(integer("n_steps", "n_steps", [](RunConfig& c) -> int& { return c.n_steps; }));
    t.push_back(integer("output_decimation", "output_decimation", [](RunConfig& c) -> int& { return c.setup.output_decimation; }));
    {
      KeyDef d;
      d.name = "noise_levels";
      d.required = false;
      d.invariant = "noise_levels";
      d.read = [](const json& v, RunConfig& c) {
        if (!v.is_array() || v.empty()) throw ConfigError("noise_levels: expected a non-empty array");
        c.noise_levels.clear();
        for (std::size_t i = 0; i < v.size(); ++i)
          c.noise_levels.push_back(as_number(v[i], "noise_levels[" + std::to_string(i) + "]"));
      };
      d.write = [](const RunConfig& c) { return json(c.noise_levels); };
      t.push_back(d);
    }
    t.push_back(integer("n_seeds", "n_seeds", [](RunConfig& c) -> int& { return c.n_seeds; }));
    t.push_back(integer("sweep_steps", "sweep_steps", [](RunConfig& c) -> int& { return c.sweep_steps; }));
    t.push_back(number("return_map_delta", false, "return_map_delta", [](RunConfig& c) -> double& { return c.return_map_delta; }));
    return t;
  }();
  return table;
}

void check(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("invariant violated: " + what);
}

void validate_run(const RunConfig& c) {
  c.setup.validate();
  if (c.setup.servo.attack_angle != c.setup.command.attack_angle)
    throw InvalidArgument("invariant violated: servo and command attack_angle agree");
  check(std::isfinite(c.initial.x) && std::isfinite(c.initial.vx) && std::isfinite(c.initial.vy),
        "initial state finite");
  check(c.initial.y > 0.0, "initial_y > 0");
  check(c.n_steps >= 1, "n_steps >= 1");
  for (double l : c.noise_levels) check(l >= 0.0 && l <= 0.5, "noise_levels in [0, 0.5]");
  check(c.n_seeds >= 1, "n_seeds >= 1");
  check(c.sweep_steps >= 1, "sweep_steps >= 1");
  check(c.return_map_delta > 0.0, "return_map_delta > 0");
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const { return echo_config(*this) == echo_config(o); }

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const KeyDef& d : key_table())
      if (d.required) k.push_back(d.name);
    return k;
  }();
  return keys;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); });
  if (blank) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("<root>: malformed JSON: ") + e.what());
    }
  }
  if (!doc.is_object()) throw ConfigError("<root>: expected a JSON object");

  std::vector<std::string> unknown;
  for (const auto& [key, _] : doc.items()) {
    const auto& table = key_table();
    if (std::none_of(table.begin(), table.end(), [&](const KeyDef& d) { return d.name == key; }))
      unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown key(s):";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  std::vector<std::string> missing;
  for (const auto& k : required_config_keys())
    if (!doc.contains(k)) missing.push_back(k);
  if (!missing.empty()) {
    std::string msg = "missing required key(s):";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }

  RunConfig cfg;
  for (const KeyDef& d : key_table()) {
    if (!doc.contains(d.name)) continue;
    d.read(doc.at(d.name), cfg);
  }
  cfg.setup.servo.attack_angle = cfg.setup.command.attack_angle;
  if (!doc.contains("initial_y_m")) cfg.initial.y = cfg.setup.command.apex_des;
  if (!doc.contains("initial_vx_m_per_s")) cfg.initial.vx = cfg.setup.command.v_des;

  try {
    validate_run(cfg);
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    std::string key = "<root>";
    for (const KeyDef& d : key_table())
      if (!d.invariant.empty() && what.find(d.invariant) != std::string::npos) {
        key = d.name;
        break;
      }
    throw ConfigError(key + ": " + what);
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string echo_config(const RunConfig& cfg, int indent) {
  json out = json::object();
  for (const KeyDef& d : key_table()) out[d.name] = d.write(cfg);
  return out.dump(indent);
}

}  // namespace slip
