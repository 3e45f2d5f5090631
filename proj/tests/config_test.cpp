#include "slip/config.hpp"

#include <gtest/gtest.h>

namespace slip {
namespace {

const char* kMinimal = R"({
  "mass_kg": 6.0,
  "stiffness_n_per_m": 2200,
  "rest_length_m": 0.25,
  "damping_n_s_per_m": 5.0,
  "gravity_m_per_s2": 9.81,
  "desired_velocity_m_per_s": 0.5,
  "desired_apex_m": 0.3,
  "attack_angle_rad": 1.8325957
})";

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(ParseConfig, EmptyObjectListsEveryMissingKey) {
  const std::string msg = error_of("{}");
  ASSERT_FALSE(msg.empty());
  for (const std::string& key : required_config_keys()) EXPECT_NE(msg.find(key), std::string::npos) << key;
  EXPECT_EQ(required_config_keys().size(), 8u);
}

TEST(ParseConfig, EmptyFileListsEveryMissingKey) {
  const std::string msg = error_of("");
  for (const std::string& key : required_config_keys()) EXPECT_NE(msg.find(key), std::string::npos) << key;
}

TEST(ParseConfig, NegativeMassNamesInvariant) {
  std::string text = kMinimal;
  text.replace(text.find("6.0"), 3, "-1");
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("ModelParams.m > 0"), std::string::npos) << msg;
  EXPECT_EQ(msg.rfind("mass_kg", 0), 0u) << msg;
}

TEST(ParseConfig, UnknownKeyRejected) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), ", \"mass\": 3");
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("unknown key"), std::string::npos);
  EXPECT_NE(msg.find("mass"), std::string::npos);
}

TEST(ParseConfig, WrongTypeRejected) {
  std::string text = kMinimal;
  text.replace(text.find("0.25"), 4, "\"short\"");
  EXPECT_NE(error_of(text).find("rest_length_m"), std::string::npos);
  EXPECT_FALSE(error_of("[1, 2]").empty());
  EXPECT_FALSE(error_of("{not json").empty());
}

TEST(ParseConfig, DefaultsApplied) {
  const RunConfig cfg = parse_config_text(kMinimal);
  EXPECT_EQ(cfg.setup.model.mass, 6.0);
  EXPECT_EQ(cfg.setup.controller.eta1, -30.0);
  EXPECT_EQ(cfg.setup.integrator.step_size, 1e-4);
  EXPECT_EQ(cfg.initial.y, 0.3);
  EXPECT_EQ(cfg.initial.vx, 0.5);
  EXPECT_EQ(cfg.setup.servo.attack_angle, cfg.setup.command.attack_angle);
}

TEST(ParseConfig, EchoRoundTrip) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'),
              ", \"touchdown_noise_fraction\": 0.1, \"seed\": 18446744073709551615, "
              "\"observer_poles_per_s\": [-100, -110, -120, -130], \"step_size_s\": 5e-5, "
              "\"noise_levels\": [0.1, 0.0], \"controller_enabled\": false, \"initial_vy_m_per_s\": 0.1");
  const RunConfig first = parse_config_text(text);
  const std::string echo = echo_config(first);
  const RunConfig second = parse_config_text(echo);
  EXPECT_TRUE(first == second);
  EXPECT_EQ(echo, echo_config(second));
  EXPECT_EQ(second.setup.noise.seed, 18446744073709551615ull);
  EXPECT_EQ(second.setup.integrator.step_size, 5e-5);
}

TEST(ParseConfig, MissingFile) { EXPECT_THROW(parse_config("/nonexistent/config.json"), ConfigError); }

}  // namespace
}  // namespace slip
