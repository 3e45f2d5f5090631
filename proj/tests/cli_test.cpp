#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "slip/commands.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::path(SLIP_TEST_SCRATCH) / "cli_scratch";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kScratch);
  const fs::path p = kScratch / name;
  std::ofstream(p) << text;
  return p;
}

int slipgait(const std::string& args) {
  const std::string cmd = std::string(SLIPGAIT_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kConfig = R"({
  "mass_kg": 6.0,
  "stiffness_n_per_m": 2200,
  "rest_length_m": 0.25,
  "damping_n_s_per_m": 5.0,
  "gravity_m_per_s2": 9.81,
  "desired_velocity_m_per_s": 0.5,
  "desired_apex_m": 0.3,
  "attack_angle_rad": 1.8325957,
  "n_steps": 3
})";

TEST(SlipgaitRun, ThreeStepsGiveThreeTouchdownsAndLiftoffs) {
  const fs::path cfg = write_config("run.json", kConfig);
  const fs::path out = kScratch / "run";
  ASSERT_EQ(slipgait("run --config " + cfg.string() + " --out " + out.string()), slip::kExitOk);
  const auto summary = nlohmann::json::parse(slurp(out / "steps.json"));
  ASSERT_EQ(summary.at("steps").size(), 3u);
  for (const auto& s : summary.at("steps")) {
    EXPECT_TRUE(s.contains("touchdown"));
    EXPECT_TRUE(s.contains("liftoff"));
  }
  EXPECT_TRUE(summary.contains("config"));
  EXPECT_TRUE(summary.contains("seed"));

  const std::string csv = slurp(out / "trajectory.csv");
  EXPECT_EQ(csv.rfind("# config:", 0), 0u);
  EXPECT_NE(csv.find("\ntime_s,phase,x_m,y_m,vx_m_s,vy_m_s,r_m,theta_rad,u1,u2,e2_1,e2_2,H_J\n"),
            std::string::npos);
  // flight rows leave the stance-only columns empty
  EXPECT_NE(csv.find(",flight,"), std::string::npos);
  EXPECT_NE(csv.find(",,,,,,,"), std::string::npos);
}

TEST(SlipgaitRun, RerunIsByteIdentical) {
  std::string text = kConfig;
  text.insert(text.rfind('}'), ", \"touchdown_noise_fraction\": 0.1, \"liftoff_noise_fraction\": 0.05");
  const fs::path cfg = write_config("noisy.json", text);
  const fs::path a = kScratch / "a", b = kScratch / "b";
  ASSERT_EQ(slipgait("run --config " + cfg.string() + " --out " + a.string() + " --seed 77"), 0);
  ASSERT_EQ(slipgait("run --config " + cfg.string() + " --out " + b.string() + " --seed 77"), 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "steps.json"), slurp(b / "steps.json"));
  EXPECT_NE(slurp(a / "steps.json").find("\"seed\": 77"), std::string::npos);
}

TEST(SlipgaitRun, StepsFlagOverridesConfig) {
  const fs::path cfg = write_config("run.json", kConfig);
  const fs::path out = kScratch / "steps";
  ASSERT_EQ(slipgait("run --config " + cfg.string() + " --out " + out.string() + " --steps 2"), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(out / "steps.json")).at("steps").size(), 2u);
}

TEST(SlipgaitExitCodes, ConfigAndSimulationErrors) {
  EXPECT_EQ(slipgait("run --config " + write_config("empty.json", "").string()), slip::kExitConfig);
  EXPECT_EQ(slipgait("run"), slip::kExitConfig);
  EXPECT_EQ(slipgait("frobnicate --config x"), slip::kExitConfig);

  std::string low = kConfig;
  low.insert(low.rfind('}'), ", \"initial_y_m\": 0.2");
  const fs::path cfg = write_config("low.json", low);
  const fs::path out = kScratch / "low";
  EXPECT_EQ(slipgait("run --config " + cfg.string() + " --out " + out.string()), slip::kExitSimulation);
  const auto summary = nlohmann::json::parse(slurp(out / "steps.json"));
  EXPECT_EQ(summary.at("failure").at("reason"), "apex_below_touchdown");
}

TEST(FormatNumber, FixedDigitsAndEmptyNaN) {
  EXPECT_EQ(slip::format_number(std::nan("")), "");
  EXPECT_EQ(slip::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(slip::format_number(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
