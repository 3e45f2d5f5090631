#pragma once

// Apex return map, limit-cycle search, finite-difference linearization and
// seeded noise sweeps built on run_gait.

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "slip/gait.hpp"

namespace slip {

struct ApexState {
  double y = 0.0;
  double vx = 0.0;

  bool operator==(const ApexState&) const = default;
};

double sup_distance(const ApexState& a, const ApexState& b);

struct ReturnMapSample {
  ApexState from;
  ApexState to;
};

using ApexMap = std::function<ApexState(const ApexState&)>;

/// One noise-free cycle from the apex (0, y) with forward speed vx to the
/// next apex. Throws GaitFailure when the cycle fails.
ApexState return_map(const ApexState& apex, const GaitSetup& setup);

/// return_map bound to a setup with noise removed and trajectory recording off.
ApexMap make_apex_map(const GaitSetup& setup);

struct LimitCycle {
  ApexState fixed_point;
  int cycles = 0;              // map applications until the step fell below tolerance
  double last_step = 0.0;      // sup-norm of the final apex update
  std::vector<ApexState> history;  // starting apex first
};

/// Iterates the apex map until successive apexes differ by less than
/// `tolerance` in sup-norm. Throws GaitFailure on a failed cycle and
/// std::runtime_error when the budget runs out.
LimitCycle find_limit_cycle(const ApexMap& map, const ApexState& start, double tolerance = 1e-8,
                            int max_cycles = 200);

struct ReturnMapAnalysis {
  Eigen::Matrix2d jacobian;
  std::array<std::complex<double>, 2> eigenvalues;
  std::array<double, 2> magnitudes{};
  double delta = 0.0;
  bool stable = false;  // every magnitude below one
};

/// Central differences of the map about `point` with perturbation delta in
/// each coordinate.
ReturnMapAnalysis return_map_jacobian(const ApexMap& map, const ApexState& point,
                                      double delta = 1e-5);

/// Forward speed at which a passive hop from apex height apex_y returns to
/// the same apex, i.e. a stance symmetric about the vertical. Bisects the
/// apex-speed residual on [lo, hi], which must bracket a sign change.
double symmetric_launch_speed(const GaitSetup& setup, double apex_y, double lo, double hi);

struct SweepOptions {
  std::vector<double> levels{0.0, 0.05, 0.10};
  int n_seeds = 50;
  int n_steps = 20;
  std::uint64_t base_seed = 1;   // seeds are base_seed, base_seed + 1, ...
  double reconverge_band = 1e-4; // sup-norm distance to the fixed point
  int max_recovery_cycles = 20;
  bool concurrent = true;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool success = false;
  std::string failure_reason;  // empty on success
  int completed_steps = 0;
  double max_e2_liftoff = 0.0;
  double max_e2_ratio = 0.0;        // liftoff over touchdown, worst stance
  bool liftoff_below_touchdown = true;
  int cycles_to_reconverge = -1;    // noise-free cycles after the noisy run; -1 if not reached
};

struct LevelReport {
  double level = 0.0;
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;
  double max_e2_liftoff = 0.0;
  double max_e2_ratio = 0.0;
  bool every_stance_converged = true;
  int max_cycles_to_reconverge = 0;
  double mean_cycles_to_reconverge = 0.0;
  std::map<std::string, int> failures;
  std::vector<SeedOutcome> seeds;
};

struct RobustnessReport {
  ApexState fixed_point;
  std::vector<LevelReport> levels;  // ascending
};

/// Runs every (level, seed) cell from the fixed-point apex with touchdown
/// noise at that level. Cells may run concurrently; results are merged in
/// (level, seed) order, so the report depends only on the inputs.
RobustnessReport robustness_sweep(const GaitSetup& setup, const ApexState& fixed_point,
                                  const SweepOptions& opts);

}  // namespace slip
