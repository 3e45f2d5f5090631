#pragma once

// Experiment commands that write self-describing report files, plus the
// property suite shared by `slipgait validate` and the acceptance binary.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "slip/config.hpp"
#include "slip/experiments.hpp"

namespace slip {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSimulation = 2,
  kExitValidation = 3,
};

/// 17 significant digits, '.' separator, independent of locale. NaN gives "".
std::string format_number(double v);

/// Trajectory CSV: comment lines with the effective config and seed, then
/// the column header and one row per sample.
std::string trajectory_csv(const GaitLog& log, const RunConfig& cfg);

/// Step summary as JSON with the effective config, seed and failure (if any).
std::string step_summary(const GaitLog& log, const RunConfig& cfg);

/// Writes trajectory.csv and steps.json under `out`.
int cmd_run(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// limit_cycle.json and limit_cycle.csv (apex history).
int cmd_limit_cycle(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// return_map.json: Jacobian at delta and delta / 2 about the fixed point.
int cmd_return_map(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// robustness.json, robustness.csv (per level) and robustness_seeds.csv.
int cmd_robustness(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Runs the property suite; writes validation.json and prints one line per check.
int cmd_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Configuration every acceptance check pins for itself: the default model
/// and command with the default controller.
RunConfig pinned_config();

/// The eight acceptance properties, in order. `scratch` receives the files
/// of the determinism check.
std::vector<CheckResult> acceptance_suite(const std::filesystem::path& scratch);

}  // namespace slip
