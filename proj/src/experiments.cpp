#include "slip/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "slip/errors.hpp"

namespace slip {

double sup_distance(const ApexState& a, const ApexState& b) {
  return std::max(std::abs(a.y - b.y), std::abs(a.vx - b.vx));
}

ApexState return_map(const ApexState& apex, const GaitSetup& setup) {
  GaitSetup quiet = setup;
  quiet.noise.touchdown_noise_fraction = 0.0;
  quiet.noise.liftoff_noise_fraction = 0.0;
  quiet.record_trajectory = false;
  const GaitLog log = run_gait(apex_flight_state(apex.y, apex.vx), quiet, 1);
  if (log.failure) throw GaitFailure(log.failure->reason, log.failure->message);
  return {log.final_apex->y, log.final_apex->vx};
}

ApexMap make_apex_map(const GaitSetup& setup) {
  return [setup](const ApexState& a) { return return_map(a, setup); };
}

LimitCycle find_limit_cycle(const ApexMap& map, const ApexState& start, double tolerance,
                            int max_cycles) {
  if (!(tolerance > 0.0)) throw InvalidArgument("find_limit_cycle: tolerance must be positive");
  LimitCycle out;
  out.history.push_back(start);
  ApexState current = start;
  for (int i = 1; i <= max_cycles; ++i) {
    const ApexState next = map(current);
    out.history.push_back(next);
    out.last_step = sup_distance(next, current);
    current = next;
    if (out.last_step < tolerance) {
      out.fixed_point = current;
      out.cycles = i;
      return out;
    }
  }
  throw std::runtime_error("find_limit_cycle: no convergence within " +
                           std::to_string(max_cycles) + " cycles");
}

ReturnMapAnalysis return_map_jacobian(const ApexMap& map, const ApexState& point, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("return_map_jacobian: delta must be positive");
  ReturnMapAnalysis out;
  out.delta = delta;
  for (int j = 0; j < 2; ++j) {
    ApexState plus = point;
    ApexState minus = point;
    (j == 0 ? plus.y : plus.vx) += delta;
    (j == 0 ? minus.y : minus.vx) -= delta;
    const ApexState fp = map(plus);
    const ApexState fm = map(minus);
    out.jacobian(0, j) = (fp.y - fm.y) / (2.0 * delta);
    out.jacobian(1, j) = (fp.vx - fm.vx) / (2.0 * delta);
  }
  out.eigenvalues = eigenvalues_2x2(out.jacobian);
  out.stable = true;
  for (int i = 0; i < 2; ++i) {
    out.magnitudes[i] = std::abs(out.eigenvalues[i]);
    out.stable = out.stable && out.magnitudes[i] < 1.0;
  }
  return out;
}

double symmetric_launch_speed(const GaitSetup& setup, double apex_y, double lo, double hi) {
  const ApexMap map = make_apex_map(setup);
  auto residual = [&](double vx) { return map({apex_y, vx}).vx - vx; };
  double f_lo = residual(lo);
  const double f_hi = residual(hi);
  if (!(f_lo * f_hi < 0.0))
    throw InvalidArgument("symmetric_launch_speed: [lo, hi] does not bracket a symmetric hop");
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = residual(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

SeedOutcome run_cell(const GaitSetup& base, const ApexState& fixed_point, double level,
                     std::uint64_t seed, const SweepOptions& opts) {
  GaitSetup setup = base;
  setup.noise.touchdown_noise_fraction = level;
  setup.noise.seed = seed;
  setup.record_trajectory = false;

  SeedOutcome out;
  out.seed = seed;
  const GaitLog log = run_gait(apex_flight_state(fixed_point.y, fixed_point.vx), setup, opts.n_steps);
  out.completed_steps = static_cast<int>(log.steps.size());
  for (const StepRecord& s : log.steps) {
    out.max_e2_liftoff = std::max(out.max_e2_liftoff, s.e2_liftoff);
    if (s.e2_touchdown > 0.0) out.max_e2_ratio = std::max(out.max_e2_ratio, s.e2_liftoff / s.e2_touchdown);
    if (!(s.e2_liftoff < s.e2_touchdown)) out.liftoff_below_touchdown = false;
  }
  if (log.failure) {
    out.failure_reason = to_string(log.failure->reason);
    return out;
  }
  out.success = true;

  const ApexMap map = make_apex_map(base);
  ApexState apex{log.final_apex->y, log.final_apex->vx};
  try {
    for (int k = 0; k <= opts.max_recovery_cycles; ++k) {
      if (sup_distance(apex, fixed_point) < opts.reconverge_band) {
        out.cycles_to_reconverge = k;
        break;
      }
      apex = map(apex);
    }
  } catch (const GaitFailure&) {
    // recovery is reported as not reached
  }
  return out;
}

LevelReport summarize(double level, std::vector<SeedOutcome> seeds) {
  LevelReport r;
  r.level = level;
  r.runs = static_cast<int>(seeds.size());
  int reconverged = 0;
  double cycles_sum = 0.0;
  for (const SeedOutcome& s : seeds) {
    r.max_e2_liftoff = std::max(r.max_e2_liftoff, s.max_e2_liftoff);
    r.max_e2_ratio = std::max(r.max_e2_ratio, s.max_e2_ratio);
    r.every_stance_converged = r.every_stance_converged && s.liftoff_below_touchdown;
    if (s.success) {
      ++r.successes;
    } else {
      ++r.failures[s.failure_reason];
    }
    if (s.cycles_to_reconverge >= 0) {
      ++reconverged;
      cycles_sum += s.cycles_to_reconverge;
      r.max_cycles_to_reconverge = std::max(r.max_cycles_to_reconverge, s.cycles_to_reconverge);
    }
  }
  r.success_rate = r.runs > 0 ? static_cast<double>(r.successes) / r.runs : 0.0;
  r.mean_cycles_to_reconverge = reconverged > 0 ? cycles_sum / reconverged : 0.0;
  r.seeds = std::move(seeds);
  return r;
}

}  // namespace

RobustnessReport robustness_sweep(const GaitSetup& setup, const ApexState& fixed_point,
                                  const SweepOptions& opts) {
  if (opts.n_seeds < 1) throw InvalidArgument("robustness_sweep: n_seeds must be at least 1");
  if (opts.n_steps < 1) throw InvalidArgument("robustness_sweep: n_steps must be at least 1");
  std::vector<double> levels = opts.levels;
  for (double l : levels)
    if (!(l >= 0.0 && l <= 0.5)) throw InvalidArgument("robustness_sweep: levels must lie in [0, 0.5]");
  std::sort(levels.begin(), levels.end());
  setup.validate();

  RobustnessReport report;
  report.fixed_point = fixed_point;
  for (double level : levels) {
    std::vector<SeedOutcome> seeds(static_cast<std::size_t>(opts.n_seeds));
    if (opts.concurrent) {
      std::vector<std::future<SeedOutcome>> jobs;
      for (int i = 0; i < opts.n_seeds; ++i)
        jobs.push_back(std::async(std::launch::async, run_cell, std::cref(setup), fixed_point, level,
                                  opts.base_seed + static_cast<std::uint64_t>(i), std::cref(opts)));
      for (std::size_t i = 0; i < jobs.size(); ++i) seeds[i] = jobs[i].get();
    } else {
      for (int i = 0; i < opts.n_seeds; ++i)
        seeds[static_cast<std::size_t>(i)] =
            run_cell(setup, fixed_point, level, opts.base_seed + static_cast<std::uint64_t>(i), opts);
    }
    report.levels.push_back(summarize(level, std::move(seeds)));
  }
  return report;
}

}  // namespace slip
