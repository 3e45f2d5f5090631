#include "slip/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "slip/control.hpp"
#include "slip/reference.hpp"

namespace slip {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_json(const RunConfig& cfg) { return json::parse(echo_config(cfg, -1)); }

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << body;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json state_json(const FlightState& s) {
  return {{"x_m", s.x}, {"y_m", s.y}, {"vx_m_s", s.vx}, {"vy_m_s", s.vy}};
}

json event_json(const EventRecord& e) {
  return {{"time_s", e.time},
          {"perceived_time_s", e.perceived_time},
          {"true_state", state_json(e.true_state)},
          {"perceived_state", state_json(e.perceived_state)},
          {"noise_fraction", e.noise},
          {"guard_residual", e.guard_residual}};
}

json apex_json(const ApexRecord& a) {
  return {{"time_s", a.time},
          {"y_m", a.y},
          {"vx_m_s", a.vx},
          {"kinetic_J", a.energy.kinetic},
          {"gravitational_J", a.energy.gravitational},
          {"spring_J", a.energy.spring},
          {"hamiltonian_J", a.energy.hamiltonian},
          {"nonconservative_work_J", a.energy.nonconservative_work}};
}

json apex_state_json(const ApexState& a) { return {{"y_m", a.y}, {"vx_m_s", a.vx}}; }

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const GaitFailure& e) {
    log << "simulation failure (" << to_string(e.reason()) << "): " << e.what() << "\n";
    return kExitSimulation;
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
}

LimitCycle locate_cycle(const RunConfig& cfg) {
  return find_limit_cycle(make_apex_map(cfg.setup), {cfg.initial.y, cfg.initial.vx});
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

std::string trajectory_csv(const GaitLog& log, const RunConfig& cfg) {
  std::string out;
  out += "# config: " + echo_config(cfg, -1) + "\n";
  out += "# seed: " + std::to_string(cfg.setup.noise.seed) + "\n";
  out += "time_s,phase,x_m,y_m,vx_m_s,vy_m_s,r_m,theta_rad,u1,u2,e2_1,e2_2,H_J\n";
  for (const TrajectorySample& s : log.trajectory) {
    const double row[] = {s.body.x, s.body.y, s.body.vx, s.body.vy, s.r, s.theta,
                          s.u.x(),  s.u.y(),  s.e2.x(),  s.e2.y(),  s.hamiltonian};
    out += format_number(s.time);
    out += s.phase == PhaseTag::Flight ? ",flight" : ",stance";
    for (double v : row) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

std::string step_summary(const GaitLog& log, const RunConfig& cfg) {
  json steps = json::array();
  for (const StepRecord& s : log.steps) {
    const ReferenceTrajectory& r = s.reference;
    steps.push_back({{"index", s.index},
                     {"apex", apex_json(s.apex)},
                     {"touchdown", event_json(s.touchdown)},
                     {"liftoff", event_json(s.liftoff)},
                     {"foot_x_m", s.foot_x},
                     {"reference",
                      {{"a", r.coeffs.a},
                       {"b", r.coeffs.b},
                       {"c", r.coeffs.c},
                       {"start_time_s", r.start_time},
                       {"t_stance_s", r.t_stance},
                       {"compression_m", r.compression},
                       {"apex_drop_m", r.apex_drop}}},
                     {"e2_touchdown_m", s.e2_touchdown},
                     {"e2_max_m", s.e2_max},
                     {"e2_liftoff_m", s.e2_liftoff},
                     {"saturated_steps", s.saturated_steps},
                     {"stance_work_J", s.stance_work}});
  }
  json doc = {{"config", config_json(cfg)}, {"seed", cfg.setup.noise.seed}, {"steps", steps}};
  doc["final_apex"] = log.final_apex ? apex_json(*log.final_apex) : json(nullptr);
  if (log.failure) {
    doc["failure"] = {{"step", log.failure->step},
                      {"reason", std::string(to_string(log.failure->reason))},
                      {"message", log.failure->message}};
  } else {
    doc["failure"] = nullptr;
  }
  return json_text(doc);
}

int cmd_run(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  return guarded(log, [&] {
    fs::create_directories(out);
    const GaitLog g = run_gait(cfg.initial, cfg.setup, cfg.n_steps);
    write_file(out / "trajectory.csv", trajectory_csv(g, cfg));
    write_file(out / "steps.json", step_summary(g, cfg));
    if (g.failure) {
      log << "step " << g.failure->step << " failed (" << to_string(g.failure->reason)
          << "): " << g.failure->message << "\n";
      return static_cast<int>(kExitSimulation);
    }
    log << "completed " << g.steps.size() << " steps\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_limit_cycle(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  return guarded(log, [&] {
    fs::create_directories(out);
    const LimitCycle lc = locate_cycle(cfg);
    json history = json::array();
    std::string csv = "# config: " + echo_config(cfg, -1) + "\n# seed: " +
                      std::to_string(cfg.setup.noise.seed) + "\ncycle,apex_y_m,apex_vx_m_s\n";
    for (std::size_t i = 0; i < lc.history.size(); ++i) {
      history.push_back(apex_state_json(lc.history[i]));
      csv += std::to_string(i) + "," + format_number(lc.history[i].y) + "," +
             format_number(lc.history[i].vx) + "\n";
    }
    json doc = {{"config", config_json(cfg)},
                {"seed", cfg.setup.noise.seed},
                {"fixed_point", apex_state_json(lc.fixed_point)},
                {"cycles", lc.cycles},
                {"last_step", lc.last_step},
                {"apex_bias_m", lc.fixed_point.y - cfg.setup.command.apex_des},
                {"history", history}};
    write_file(out / "limit_cycle.json", json_text(doc));
    write_file(out / "limit_cycle.csv", csv);
    log << "fixed point y=" << format_number(lc.fixed_point.y)
        << " vx=" << format_number(lc.fixed_point.vx) << " after " << lc.cycles << " cycles\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_return_map(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  return guarded(log, [&] {
    fs::create_directories(out);
    const LimitCycle lc = locate_cycle(cfg);
    const ApexMap map = make_apex_map(cfg.setup);
    json runs = json::array();
    bool stable = true;
    for (double delta : {cfg.return_map_delta, 0.5 * cfg.return_map_delta}) {
      const ReturnMapAnalysis a = return_map_jacobian(map, lc.fixed_point, delta);
      stable = stable && a.stable;
      runs.push_back({{"delta", delta},
                      {"jacobian",
                       {{a.jacobian(0, 0), a.jacobian(0, 1)}, {a.jacobian(1, 0), a.jacobian(1, 1)}}},
                      {"eigenvalues",
                       {{a.eigenvalues[0].real(), a.eigenvalues[0].imag()},
                        {a.eigenvalues[1].real(), a.eigenvalues[1].imag()}}},
                      {"magnitudes", {a.magnitudes[0], a.magnitudes[1]}},
                      {"stable", a.stable}});
      log << "delta=" << format_number(delta) << " |eig|=" << format_number(a.magnitudes[0])
          << ", " << format_number(a.magnitudes[1]) << (a.stable ? " stable\n" : " unstable\n");
    }
    json doc = {{"config", config_json(cfg)},
                {"seed", cfg.setup.noise.seed},
                {"fixed_point", apex_state_json(lc.fixed_point)},
                {"analyses", runs},
                {"stable", stable}};
    write_file(out / "return_map.json", json_text(doc));
    return static_cast<int>(kExitOk);
  });
}

int cmd_robustness(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  return guarded(log, [&] {
    fs::create_directories(out);
    const LimitCycle lc = locate_cycle(cfg);
    SweepOptions opts;
    opts.levels = cfg.noise_levels;
    opts.n_seeds = cfg.n_seeds;
    opts.n_steps = cfg.sweep_steps;
    opts.base_seed = cfg.setup.noise.seed;
    const RobustnessReport rep = robustness_sweep(cfg.setup, lc.fixed_point, opts);

    const std::string head = "# config: " + echo_config(cfg, -1) + "\n# seed: " +
                             std::to_string(cfg.setup.noise.seed) + "\n";
    std::string level_csv = head +
        "level,runs,successes,success_rate,max_e2_liftoff_m,max_e2_ratio,every_stance_converged,"
        "mean_cycles_to_reconverge,max_cycles_to_reconverge\n";
    std::string seed_csv = head +
        "level,seed,success,failure_reason,completed_steps,max_e2_liftoff_m,max_e2_ratio,"
        "liftoff_below_touchdown,cycles_to_reconverge\n";
    json levels = json::array();
    for (const LevelReport& l : rep.levels) {
      level_csv += format_number(l.level) + "," + std::to_string(l.runs) + "," +
                   std::to_string(l.successes) + "," + format_number(l.success_rate) + "," +
                   format_number(l.max_e2_liftoff) + "," + format_number(l.max_e2_ratio) + "," +
                   (l.every_stance_converged ? "1" : "0") + "," +
                   format_number(l.mean_cycles_to_reconverge) + "," +
                   std::to_string(l.max_cycles_to_reconverge) + "\n";
      json seeds = json::array();
      for (const SeedOutcome& s : l.seeds) {
        seed_csv += format_number(l.level) + "," + std::to_string(s.seed) + "," +
                    (s.success ? "1" : "0") + "," + s.failure_reason + "," +
                    std::to_string(s.completed_steps) + "," + format_number(s.max_e2_liftoff) +
                    "," + format_number(s.max_e2_ratio) + "," +
                    (s.liftoff_below_touchdown ? "1" : "0") + "," +
                    std::to_string(s.cycles_to_reconverge) + "\n";
        seeds.push_back({{"seed", s.seed},
                         {"success", s.success},
                         {"failure_reason", s.failure_reason},
                         {"completed_steps", s.completed_steps},
                         {"max_e2_liftoff_m", s.max_e2_liftoff},
                         {"max_e2_ratio", s.max_e2_ratio},
                         {"liftoff_below_touchdown", s.liftoff_below_touchdown},
                         {"cycles_to_reconverge", s.cycles_to_reconverge}});
      }
      levels.push_back({{"level", l.level},
                        {"runs", l.runs},
                        {"successes", l.successes},
                        {"success_rate", l.success_rate},
                        {"max_e2_liftoff_m", l.max_e2_liftoff},
                        {"max_e2_ratio", l.max_e2_ratio},
                        {"every_stance_converged", l.every_stance_converged},
                        {"mean_cycles_to_reconverge", l.mean_cycles_to_reconverge},
                        {"max_cycles_to_reconverge", l.max_cycles_to_reconverge},
                        {"failures", l.failures},
                        {"seeds", seeds}});
      log << "level " << format_number(l.level) << ": success " << l.successes << "/" << l.runs
          << ", max liftoff e2 " << format_number(l.max_e2_liftoff) << "\n";
    }
    json doc = {{"config", config_json(cfg)},
                {"seed", cfg.setup.noise.seed},
                {"fixed_point", apex_state_json(rep.fixed_point)},
                {"levels", levels}};
    write_file(out / "robustness.json", json_text(doc));
    write_file(out / "robustness.csv", level_csv);
    write_file(out / "robustness_seeds.csv", seed_csv);
    return static_cast<int>(kExitOk);
  });
}

int cmd_validate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  return guarded(log, [&] {
    fs::create_directories(out);
    const auto results = acceptance_suite(out / "validate_scratch");
    json checks = json::array();
    bool ok = true;
    for (const CheckResult& r : results) {
      ok = ok && r.passed;
      log << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << "\n";
      checks.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    json doc = {{"config", config_json(cfg)}, {"seed", cfg.setup.noise.seed}, {"checks", checks}};
    write_file(out / "validation.json", json_text(doc));
    return static_cast<int>(ok ? kExitOk : kExitValidation);
  });
}

RunConfig pinned_config() {
  RunConfig cfg;
  cfg.setup = GaitSetup{};
  cfg.setup.servo.attack_angle = cfg.setup.command.attack_angle;
  cfg.initial = apex_flight_state(cfg.setup.command.apex_des, cfg.setup.command.v_des);
  return cfg;
}

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

CheckResult check_repeatability() {
  CheckResult r{1, "limit-cycle repeatability", false, {}};
  RunConfig cfg = pinned_config();
  cfg.setup.record_trajectory = false;
  const auto t0 = std::chrono::steady_clock::now();
  const GaitLog log = run_gait(cfg.initial, cfg.setup, 30);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (log.failure) {
    r.detail = "gait failed at step " + std::to_string(log.failure->step);
    return r;
  }
  double worst = 0.0;
  for (std::size_t i = 10; i + 1 < log.steps.size(); ++i) {
    worst = std::max(worst, std::max(std::abs(log.steps[i + 1].apex.y - log.steps[i].apex.y),
                                     std::abs(log.steps[i + 1].apex.vx - log.steps[i].apex.vx)));
  }
  r.passed = worst < 1e-4 && secs < 10.0;
  r.detail = "max successive apex change from cycle 10 = " + num(worst) + ", runtime " + num(secs) + " s";
  return r;
}

CheckResult check_robustness() {
  CheckResult r{2, "robustness at 10% touchdown noise", false, {}};
  const RunConfig cfg = pinned_config();
  const LimitCycle lc = locate_cycle(cfg);
  SweepOptions opts;
  opts.levels = {0.10};
  opts.n_seeds = 50;
  opts.n_steps = 20;
  const RobustnessReport rep = robustness_sweep(cfg.setup, lc.fixed_point, opts);
  const LevelReport& l = rep.levels.front();
  r.passed = l.successes == l.runs && l.every_stance_converged;
  r.detail = "success " + std::to_string(l.successes) + "/" + std::to_string(l.runs) +
             ", worst liftoff/touchdown e2 ratio " + num(l.max_e2_ratio);
  return r;
}

double match_error(std::vector<std::complex<double>> got, std::vector<double> want) {
  double worst = 0.0;
  for (double w : want) {
    auto best = got.begin();
    for (auto it = got.begin(); it != got.end(); ++it)
      if (std::abs(*it - w) < std::abs(*best - w)) best = it;
    worst = std::max(worst, std::abs(*best - w));
    got.erase(best);
  }
  return worst;
}

CheckResult check_gain_algebra() {
  CheckResult r{3, "gain algebra", false, {}};
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> eta(-100.0, -0.5);
  std::uniform_real_distribution<double> pole(-300.0, -1.0);
  const LinearPlant plant = build_plant();

  double worst_ck = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double e1 = eta(gen);
    const double e2 = eta(gen);
    const TrackingGains g = tracking_gains(e1, e2);
    const auto ev = eigenvalues_2x2(-g.CK);
    worst_ck = std::max(worst_ck, match_error({ev[0], ev[1]}, {e1, e2}));
  }
  double worst_obs = 0.0;
  double worst_union = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ObserverPoles poles{pole(gen), pole(gen), pole(gen), pole(gen)};
    const Mat42 ke = observer_gains(plant, poles);
    Eigen::EigenSolver<Mat4> es(plant.A - ke * plant.C, false);
    std::vector<std::complex<double>> got;
    for (int k = 0; k < 4; ++k) got.push_back(es.eigenvalues()[k]);
    worst_obs = std::max(worst_obs, match_error(got, {poles.begin(), poles.end()}));

    const double e1 = eta(gen);
    const double e2 = eta(gen);
    const ErrorDynamics ed = assemble_error_dynamics(plant, tracking_gains(e1, e2), ke);
    worst_union = std::max(worst_union, match_error(ed.eigenvalues, {poles[0], poles[1], poles[2],
                                                                     poles[3], e1, e2}));
  }
  r.passed = worst_ck < 1e-9 && worst_obs < 1e-9 && worst_union < 1e-9;
  r.detail = "max errors: eig(-CK) " + num(worst_ck) + ", eig(A - K_e C) " + num(worst_obs) +
             ", eig(E) " + num(worst_union);
  return r;
}

CheckResult check_energy() {
  CheckResult r{4, "passive energy conservation", false, {}};
  RunConfig cfg = pinned_config();
  cfg.setup.model.damping = 0.0;
  cfg.setup.controller.enabled = false;
  cfg.setup.output_decimation = 1;
  const double y0 = 0.30;
  const double vx0 = symmetric_launch_speed(cfg.setup, y0, 0.6, 0.9);
  const GaitLog log = run_gait(apex_flight_state(y0, vx0), cfg.setup, 10);
  if (log.failure) {
    r.detail = "passive run failed at step " + std::to_string(log.failure->step) + " (" +
               std::string(to_string(log.failure->reason)) + ")";
    return r;
  }
  const double h0 = log.trajectory.front().hamiltonian;
  double drift = 0.0;
  for (const TrajectorySample& s : log.trajectory) drift = std::max(drift, std::abs(s.hamiltonian - h0));
  drift /= std::abs(h0);
  r.passed = drift < 1e-6;
  r.detail = "max relative drift " + num(drift) + " over " + std::to_string(log.steps.size()) + " hops";
  return r;
}

CheckResult check_reference() {
  CheckResult r{5, "reference synthesis", false, {}};
  const RunConfig cfg = pinned_config();
  const ModelParams& p = cfg.setup.model;
  std::mt19937_64 gen(7);
  // Monomial coefficients in absolute x lose about eps * a * x^2 at the
  // waypoints, so feet are drawn over the distance the suite's runs cover.
  std::uniform_real_distribution<double> foot(-1.0, 7.0);
  std::uniform_real_distribution<double> angle(1.70, 1.95);
  std::uniform_real_distribution<double> speed(0.2, 2.0);
  double worst_fit = 0.0;
  double worst_energy = 0.0;
  double worst_speed = 0.0;
  for (int i = 0; i < 200; ++i) {
    GaitCommand cmd = cfg.setup.command;
    cmd.attack_angle = angle(gen);
    cmd.v_des = speed(gen);
    const FlightState td{foot(gen) + p.rest_length * std::cos(cmd.attack_angle),
                         p.rest_length * std::sin(cmd.attack_angle), cmd.v_des, -1.0};
    const ReferenceTrajectory ref = make_reference(cmd, td, 0.0, p);
    for (const Waypoint& w : ref.waypoints) {
      const double y = (ref.coeffs.a * w.x + ref.coeffs.b) * w.x + ref.coeffs.c;
      worst_fit = std::max(worst_fit, std::abs(y - w.y));
    }
    const double spring = 0.5 * p.stiffness * ref.compression * ref.compression;
    const double lift = p.mass * p.gravity * ref.apex_drop;
    worst_energy = std::max(worst_energy, std::abs(spring - lift) / lift);
    for (int k = 0; k <= 10; ++k) {
      const ReferenceSample s = reference_output(ref, ref.t_stance * k / 10.0);
      worst_speed = std::max(worst_speed, std::abs(s.vel.x() - cmd.v_des));
    }
  }
  RunConfig walk = cfg;
  walk.setup.record_trajectory = false;
  const GaitLog log = run_gait(walk.initial, walk.setup, 30);
  for (const StepRecord& s : log.steps)
    for (const Waypoint& w : s.reference.waypoints) {
      const double y = (s.reference.coeffs.a * w.x + s.reference.coeffs.b) * w.x + s.reference.coeffs.c;
      worst_fit = std::max(worst_fit, std::abs(y - w.y));
    }
  r.passed = !log.failure && worst_fit < 1e-12 && worst_energy < 8.0 * std::numeric_limits<double>::epsilon() &&
             worst_speed == 0.0;
  r.detail = "max waypoint residual " + num(worst_fit) + ", energy identity rel error " +
             num(worst_energy) + ", horizontal speed error " + num(worst_speed);
  return r;
}

CheckResult check_return_map() {
  CheckResult r{6, "return-map stability", false, {}};
  const RunConfig cfg = pinned_config();
  const LimitCycle lc = locate_cycle(cfg);
  const ApexMap map = make_apex_map(cfg.setup);
  const ReturnMapAnalysis a = return_map_jacobian(map, lc.fixed_point, 1e-5);
  const ReturnMapAnalysis b = return_map_jacobian(map, lc.fixed_point, 5e-6);
  const double agreement = (a.jacobian - b.jacobian).cwiseAbs().maxCoeff();
  r.passed = a.stable && b.stable && agreement < 1e-3;
  r.detail = "|eig| = " + num(a.magnitudes[0]) + ", " + num(a.magnitudes[1]) +
             "; entry agreement between deltas " + num(agreement);
  return r;
}

CheckResult check_events() {
  CheckResult r{7, "event accuracy", false, {}};
  RunConfig cfg = pinned_config();
  cfg.setup.record_trajectory = false;
  const ModelParams& p = cfg.setup.model;

  const GaitLog log = run_gait(cfg.initial, cfg.setup, 10);
  double worst_guard = 0.0;
  for (const StepRecord& s : log.steps)
    worst_guard = std::max({worst_guard, std::abs(s.touchdown.guard_residual),
                            std::abs(s.liftoff.guard_residual)});

  double worst_time = 0.0;
  const double alpha = cfg.setup.servo.attack_angle;
  const double y_td = p.rest_length * std::sin(alpha);
  for (double vy : {-0.5, 0.0, 0.3, 1.2}) {
    const FlightState start{0.0, 0.31, 0.5, vy};
    const FlightResult fr = run_flight(start, 0.25, alpha, cfg.setup, 0.0);
    const double oracle = 0.25 + (vy + std::sqrt(vy * vy + 2.0 * p.gravity * (start.y - y_td))) / p.gravity;
    worst_time = std::max(worst_time, std::abs(fr.touchdown.time - oracle));
    worst_guard = std::max(worst_guard, std::abs(fr.touchdown.guard_residual));
  }
  r.passed = !log.failure && worst_guard < 1e-9 && worst_time < 1e-9;
  r.detail = "max guard residual " + num(worst_guard) + ", ballistic touchdown time error " + num(worst_time) + " s";
  return r;
}

CheckResult check_determinism(const fs::path& scratch) {
  CheckResult r{8, "determinism", false, {}};
  RunConfig cfg = pinned_config();
  cfg.n_steps = 4;
  cfg.setup.noise.touchdown_noise_fraction = 0.1;
  cfg.setup.noise.seed = 99;
  std::ostringstream sink;
  const int a = cmd_run(cfg, scratch / "a", sink);
  const int b = cmd_run(cfg, scratch / "b", sink);
  const bool same_csv = read_file(scratch / "a" / "trajectory.csv") == read_file(scratch / "b" / "trajectory.csv");
  const bool same_json = read_file(scratch / "a" / "steps.json") == read_file(scratch / "b" / "steps.json");
  r.passed = a == kExitOk && b == kExitOk && same_csv && same_json;
  r.detail = std::string("trajectory.csv ") + (same_csv ? "identical" : "differs") + ", steps.json " +
             (same_json ? "identical" : "differs");
  return r;
}

template <class Fn>
CheckResult run_check(int id, const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> acceptance_suite(const fs::path& scratch) {
  return {run_check(1, "limit-cycle repeatability", check_repeatability),
          run_check(2, "robustness at 10% touchdown noise", check_robustness),
          run_check(3, "gain algebra", check_gain_algebra),
          run_check(4, "passive energy conservation", check_energy),
          run_check(5, "reference synthesis", check_reference),
          run_check(6, "return-map stability", check_return_map),
          run_check(7, "event accuracy", check_events),
          run_check(8, "determinism", [&] { return check_determinism(scratch); })};
}

}  // namespace slip
