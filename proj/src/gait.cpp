#include "slip/gait.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slip {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// (x, y, vx, vy, leg angle)
using FlightVec = Eigen::Matrix<double, 5, 1>;
// (z, x_hat, nonconservative work); z and x_hat in plant ordering
using StanceVec = Eigen::Matrix<double, 9, 1>;

FlightState body_of(const FlightVec& s) { return {s[0], s[1], s[2], s[3]}; }

double servo_target(const GaitSetup& setup, double vx) {
  const double target =
      setup.servo.attack_angle + setup.servo.velocity_gain * (vx - setup.command.v_des);
  constexpr double margin = 1e-3;
  return std::clamp(target, std::numbers::pi / 2 + margin, std::numbers::pi - margin);
}

double flight_energy(const FlightState& s, const ModelParams& p) {
  return energy_ledger(HybridState{FlightPhase{s, 0.0}, 0.0}, p).hamiltonian;
}

TrajectorySample flight_sample(double t, const FlightState& s, const ModelParams& p) {
  TrajectorySample out;
  out.time = t;
  out.phase = PhaseTag::Flight;
  out.body = s;
  out.r = kNaN;
  out.theta = kNaN;
  out.u = Vec2::Constant(kNaN);
  out.e2 = Vec2::Constant(kNaN);
  out.hamiltonian = flight_energy(s, p);
  return out;
}

template <class Fn>
auto with_flight_timeout(Fn&& fn) {
  try {
    return fn();
  } catch (const EventTimeout& e) {
    throw GaitFailure(FailureReason::FlightTimeout, e.what());
  } catch (const IntegrationError& e) {
    throw GaitFailure(FailureReason::NonFinite, e.what());
  }
}

ApexRecord make_apex(const FlightState& s, double t, const ModelParams& p, double work) {
  ApexRecord apex;
  apex.y = s.y;
  apex.vx = s.vx;
  apex.time = t;
  apex.energy = energy_ledger(HybridState{FlightPhase{s, 0.0}, t}, p, work);
  return apex;
}

struct ApexSearch {
  FlightVec state;
  double time;
};

ApexSearch find_apex(const FlightVec& s0, double t0, const GaitSetup& setup,
                     const DerivativeFn<FlightVec>& f,
                     const std::function<void(double, const FlightVec&)>& after_step) {
  if (!(s0[3] > 0.0)) return {s0, t0};
  EventSpec<FlightVec> ev;
  ev.guard = [](double, const FlightVec& s) { return s[3]; };
  ev.direction = Crossing::Falling;
  ev.after_step = after_step;
  const auto r = with_flight_timeout(
      [&] { return integrate_until_event(t0, s0, f, ev, setup.integrator); });
  return {r.state, r.time};
}

DerivativeFn<FlightVec> flight_dynamics(const GaitSetup& setup, double target) {
  const double g = setup.model.gravity;
  const double tau = setup.servo.time_constant;
  return [g, tau, target](double, const FlightVec& s) {
    FlightVec d;
    d << s[2], s[3], 0.0, -g, tau > 0.0 ? (target - s[4]) / tau : 0.0;
    return d;
  };
}

}  // namespace

void ServoConfig::validate() const {
  if (!(attack_angle > std::numbers::pi / 2 && attack_angle < std::numbers::pi))
    throw InvalidArgument("invariant violated: ServoConfig.attack_angle in (pi/2, pi)");
  if (!(time_constant >= 0.0))
    throw InvalidArgument("invariant violated: ServoConfig.time_constant >= 0");
  if (!std::isfinite(velocity_gain))
    throw InvalidArgument("invariant violated: ServoConfig.velocity_gain finite");
}

void NoiseConfig::validate() const {
  if (!(touchdown_noise_fraction >= 0.0 && touchdown_noise_fraction <= 0.5))
    throw InvalidArgument("invariant violated: NoiseConfig.touchdown_noise_fraction in [0, 0.5]");
  if (!(liftoff_noise_fraction >= 0.0 && liftoff_noise_fraction <= 0.5))
    throw InvalidArgument("invariant violated: NoiseConfig.liftoff_noise_fraction in [0, 0.5]");
}

void ControllerConfig::validate() const {
  if (!(eta1 < 0.0 && eta2 < 0.0))
    throw InvalidArgument("invariant violated: ControllerConfig.eta1, eta2 < 0");
  for (double pole : observer_poles)
    if (!(pole < 0.0))
      throw InvalidArgument("invariant violated: ControllerConfig.observer_poles < 0");
  if (!(actuator_limit >= 0.0))
    throw InvalidArgument("invariant violated: ControllerConfig.actuator_limit >= 0");
  if (!(crush_fraction >= 0.0 && crush_fraction < 1.0))
    throw InvalidArgument("invariant violated: ControllerConfig.crush_fraction in [0, 1)");
}

void GaitSetup::validate() const {
  model.validate();
  command.validate(model);
  servo.validate();
  noise.validate();
  integrator.validate();
  controller.validate();
  if (output_decimation < 1)
    throw InvalidArgument("invariant violated: output_decimation >= 1");
}

Controller make_controller(const ControllerConfig& cfg) {
  cfg.validate();
  Controller c;
  c.plant = build_plant();
  c.gains = tracking_gains(cfg.eta1, cfg.eta2);
  c.K_e = observer_gains(c.plant, cfg.observer_poles);
  c.config = cfg;
  return c;
}

double NoiseSource::draw(double fraction) {
  // 53 random mantissa bits -> [0, 1), then scaled to [-fraction, fraction)
  const double unit = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return fraction * (2.0 * unit - 1.0);
}

FlightResult run_flight(const FlightState& start, double t0, double leg_angle,
                        const GaitSetup& setup, double noise, double work_so_far,
                        Trajectory* sink) {
  const ModelParams& p = setup.model;
  const double target = servo_target(setup, start.vx);
  const auto f = flight_dynamics(setup, target);

  FlightVec s0;
  s0 << start.x, start.y, start.vx, start.vy,
      setup.servo.time_constant > 0.0 ? leg_angle : target;

  int counter = 0;
  std::function<void(double, const FlightVec&)> record;
  if (sink) {
    sink->push_back(flight_sample(t0, start, p));
    record = [&, sink](double t, const FlightVec& s) {
      if (++counter % setup.output_decimation == 0) sink->push_back(flight_sample(t, body_of(s), p));
    };
  }

  FlightResult out;
  const ApexSearch apex = find_apex(s0, t0, setup, f, record);
  out.apex = make_apex(body_of(apex.state), apex.time, p, work_so_far);
  if (sink && apex.time > t0) sink->push_back(flight_sample(apex.time, body_of(apex.state), p));

  const double touchdown_height = p.rest_length * std::sin(target);
  if (!(apex.state[1] - p.rest_length * std::sin(apex.state[4]) > 0.0) ||
      !(apex.state[1] > touchdown_height))
    throw GaitFailure(FailureReason::ApexBelowTouchdown,
                      "flight apex does not clear the touchdown height");

  EventSpec<FlightVec> td;
  td.guard = [&p](double, const FlightVec& s) {
    return touchdown_guard(body_of(s), s[4], p);
  };
  td.direction = Crossing::Falling;
  td.after_step = record;
  const auto contact = with_flight_timeout(
      [&] { return integrate_until_event(apex.time, apex.state, f, td, setup.integrator); });

  out.leg_angle = contact.state[4];
  out.touchdown.true_state = body_of(contact.state);
  out.touchdown.time = contact.time;
  out.touchdown.guard_residual = contact.guard_residual;
  out.touchdown.noise = noise;
  if (sink) sink->push_back(flight_sample(contact.time, out.touchdown.true_state, p));

  if (noise == 0.0) {
    out.touchdown.perceived_state = out.touchdown.true_state;
    out.touchdown.perceived_time = out.touchdown.time;
    return out;
  }
  // The listener compares height against a scaled threshold. Ballistic
  // motion is continued past true contact when it fires late.
  const double threshold = touchdown_height * (1.0 + noise);
  if (threshold >= apex.state[1]) {
    out.touchdown.perceived_state = body_of(apex.state);
    out.touchdown.perceived_time = apex.time;
    return out;
  }
  EventSpec<FlightVec> listener;
  listener.guard = [threshold](double, const FlightVec& s) { return s[1] - threshold; };
  listener.direction = Crossing::Falling;
  const auto heard = with_flight_timeout(
      [&] { return integrate_until_event(apex.time, apex.state, f, listener, setup.integrator); });
  out.touchdown.perceived_state = body_of(heard.state);
  out.touchdown.perceived_time = heard.time;
  return out;
}

StanceResult run_stance(const FlightResult& flight, const GaitSetup& setup,
                        const Controller& controller, double liftoff_noise, Trajectory* sink) {
  const ModelParams& p = setup.model;
  const EventRecord& td = flight.touchdown;
  const LinearPlant& plant = controller.plant;
  const double r0 = p.rest_length;

  StanceResult out;
  out.foot_x = td.true_state.x - r0 * std::cos(flight.leg_angle);
  const double foot = out.foot_x;

  GaitCommand cmd = setup.command;
  cmd.attack_angle = flight.leg_angle;
  try {
    out.reference = make_reference(cmd, td.perceived_state, td.time, p);
  } catch (const InvalidArgument& e) {
    throw GaitFailure(FailureReason::InfeasibleReference, e.what());
  }
  const ReferenceTrajectory& ref = out.reference;

  auto offset_of = [foot](const Vec4& z) { return Vec2(z[0] - foot, z[2]); };
  const DriftModel drift = [&](const Vec4& xh) {
    const Vec2 a = stance_acceleration(offset_of(xh), Vec2(xh[1], xh[3]), p);
    return Vec4(0.0, a.x(), 0.0, a.y());
  };

  bool engaged = controller.config.enabled;
  bool updating = engaged;  // false once the end-of-stance listener has fired
  Vec2 polar_cmd = Vec2::Zero();  // (leg extension rate, leg angle rate), held over a step
  Vec2 u_model = Vec2::Zero();    // the same command in Cartesian form, as the observer sees it

  auto actuator_velocity = [&](const Vec2& offset) -> Vec2 {
    if (!engaged) return Vec2::Zero();
    return polar_jacobian(offset) * polar_cmd;
  };

  const DerivativeFn<StanceVec> f = [&](double, const StanceVec& s) {
    const Vec4 z = s.head<4>();
    const Vec2 off = offset_of(z);
    const Vec2 v(z[1], z[3]);
    const Vec2 u = actuator_velocity(off);
    const Vec2 a = stance_acceleration(off, v, p);
    StanceVec d;
    d[0] = v.x() + u.x();
    d[1] = a.x();
    d[2] = v.y() + u.y();
    d[3] = a.y();
    if (engaged) {
      d.segment<4>(4) =
          observer_derivative(plant, controller.K_e, s.segment<4>(4), u_model, plant.C * z, drift);
    } else {
      d.segment<4>(4).setZero();
    }
    // Power of everything outside the spring/gravity Hamiltonian: radial
    // damping on the spring velocity and the actuator working against the
    // spring and gravity.
    const double r = off.norm();
    const Vec2 e = off / r;
    const Vec2 spring = spring_force(r, p) * e;
    const Vec2 damper = -p.damping * e.dot(v) * e;
    d[8] = v.dot(damper) + (Vec2(0.0, p.mass * p.gravity) - spring).dot(u);
    return d;
  };

  StanceVec s0;
  s0.head<4>() = plant_state(td.true_state);
  s0.segment<4>(4) = plant_state(td.perceived_state);
  s0[8] = 0.0;

  auto e2_at = [&](double t, const Vec4& z) {
    return Vec2(reference_output(ref, t, Extrapolation::Extend).pos - plant.C * z);
  };
  out.e2_touchdown = e2_at(td.time, s0.head<4>()).norm();
  out.e2_max = out.e2_touchdown;

  const double limit = controller.config.actuator_limit;
  const double crush = controller.config.crush_fraction * r0;
  int counter = 0;

  auto stance_sample = [&](double t, const StanceVec& s) {
    TrajectorySample smp;
    smp.time = t;
    smp.phase = PhaseTag::Stance;
    const Vec2 off = offset_of(s.head<4>());
    smp.u = actuator_velocity(off);
    // the COM moves at the spring-mass velocity plus the actuator velocity
    smp.body = flight_state(s.head<4>());
    smp.body.vx += smp.u.x();
    smp.body.vy += smp.u.y();
    smp.r = off.norm();
    smp.theta = std::atan2(off.y(), off.x());
    smp.e2 = e2_at(t, s.head<4>());
    smp.hamiltonian = flight_energy(smp.body, p) + spring_potential(smp.r, p);
    return smp;
  };

  auto before_step = [&](double t, const StanceVec& s) {
    const Vec4 z = s.head<4>();
    const Vec2 off = offset_of(z);
    if (!(z[2] > 0.0))
      throw GaitFailure(FailureReason::GroundStrike, "COM reached the ground during stance");
    if (!(off.norm() > crush))
      throw GaitFailure(FailureReason::LegCrush, "leg compressed past the crush limit");
    if (updating) {
      // The command is held for one step, so its feedforward terms are taken
      // at the middle of the hold: reference slope at t + h/2 and the
      // estimate advanced by half a step of known drift.
      const double half = 0.5 * setup.integrator.step_size;
      const ReferenceSample now = reference_output(ref, t, Extrapolation::Extend);
      const ReferenceSample mid = reference_output(ref, t + half, Extrapolation::Extend);
      const Vec4 x_hat = s.segment<4>(4);
      const Vec4 x_hat_mid = x_hat + half * drift(x_hat);
      const ControlOutput c =
          control_law(plant, controller.gains, x_hat_mid, now.pos, mid.vel, plant.C * z);
      const Vec2 clipped = c.u.cwiseMax(-limit).cwiseMin(limit);
      Vec2 est = offset_of(x_hat) + half * (Vec2(x_hat[1], x_hat[3]) + clipped);
      if (!(est.norm() > 0.0)) est = off;
      const Eigen::Matrix2d jac = polar_jacobian(est);
      if (clipped != c.u) ++out.saturated_steps;
      polar_cmd = jac.inverse() * clipped;
      u_model = clipped;
      out.e2_max = std::max(out.e2_max, c.e2.norm());
    }
    if (sink && counter++ % setup.output_decimation == 0) sink->push_back(stance_sample(t, s));
  };

  const bool arm_late = controller.config.enabled;
  const double arm_time = ref.bottom_time();
  auto armed = [arm_late, arm_time](double t, const StanceVec&) { return !arm_late || t >= arm_time; };

  auto run_to = [&](double t0, const StanceVec& start, double radius) {
    EventSpec<StanceVec> ev;
    ev.guard = [&, radius](double, const StanceVec& s) { return radius - offset_of(s.head<4>()).norm(); };
    ev.direction = Crossing::Falling;
    ev.armed = armed;
    ev.before_step = before_step;
    try {
      return integrate_until_event(t0, start, f, ev, setup.integrator);
    } catch (const EventTimeout& e) {
      throw GaitFailure(FailureReason::StanceTimeout, e.what());
    } catch (const IntegrationError& e) {
      throw GaitFailure(FailureReason::NonFinite, e.what());
    }
  };

  double t_start = td.time;
  StanceVec start = s0;
  bool perceived_recorded = false;
  if (liftoff_noise < 0.0) {
    // End-of-stance listener fires before the spring is unloaded: control
    // updates stop there and the actuator holds its last command.
    const auto early = run_to(t_start, start, r0 * (1.0 + liftoff_noise));
    out.liftoff.perceived_state = flight_state(early.state.head<4>());
    out.liftoff.perceived_time = early.time;
    perceived_recorded = true;
    updating = false;
    t_start = early.time;
    start = early.state;
  }
  const auto lo = run_to(t_start, start, r0);

  const Vec4 z = lo.state.head<4>();
  const Vec2 off = offset_of(z);
  const Vec2 v(z[1], z[3]);
  const Vec2 u = actuator_velocity(off);
  const Vec2 v_flight = v + u;
  out.nonconservative_work = lo.state[8] + 0.5 * p.mass * (v_flight.squaredNorm() - v.squaredNorm());
  out.liftoff.true_state = {z[0], z[2], v_flight.x(), v_flight.y()};
  out.liftoff.time = lo.time;
  out.liftoff.guard_residual = liftoff_guard(cartesian_to_stance(flight_state(z), foot), p);
  out.liftoff.noise = liftoff_noise;
  out.leg_angle = std::atan2(off.y(), off.x());
  out.e2_liftoff = e2_at(lo.time, z).norm();
  out.e2_max = std::max(out.e2_max, out.e2_liftoff);
  if (sink) sink->push_back(stance_sample(lo.time, lo.state));

  if (!perceived_recorded) {
    out.liftoff.perceived_state = out.liftoff.true_state;
    out.liftoff.perceived_time = out.liftoff.time;
    if (liftoff_noise > 0.0) {
      // Late listener: follow the ballistic continuation until the leg
      // would have reached the scaled length.
      FlightVec fs;
      fs << out.liftoff.true_state.x, out.liftoff.true_state.y, out.liftoff.true_state.vx,
          out.liftoff.true_state.vy, out.leg_angle;
      EventSpec<FlightVec> ev;
      const double radius = r0 * (1.0 + liftoff_noise);
      ev.guard = [foot, radius](double, const FlightVec& s) {
        return std::hypot(s[0] - foot, s[1]) - radius;
      };
      ev.direction = Crossing::Rising;
      IntegratorConfig short_horizon = setup.integrator;
      short_horizon.horizon = std::min(short_horizon.horizon, ref.t_stance);
      try {
        const auto heard =
            integrate_until_event(lo.time, fs, flight_dynamics(setup, fs[4]), ev, short_horizon);
        out.liftoff.perceived_state = body_of(heard.state);
        out.liftoff.perceived_time = heard.time;
      } catch (const EventTimeout&) {
        // the mass never moves that far from the foot; keep the true event
      }
    }
  }
  return out;
}

namespace {

ApexRecord apex_after_liftoff(const FlightState& s, double t0, double leg_angle,
                              const GaitSetup& setup, double work) {
  const double target = servo_target(setup, s.vx);
  FlightVec s0;
  s0 << s.x, s.y, s.vx, s.vy, setup.servo.time_constant > 0.0 ? leg_angle : target;
  const ApexSearch apex = find_apex(s0, t0, setup, flight_dynamics(setup, target), {});
  return make_apex(body_of(apex.state), apex.time, setup.model, work);
}

}  // namespace

GaitLog run_gait(const FlightState& initial, const GaitSetup& setup, int n_steps) {
  setup.validate();
  if (n_steps < 1) throw InvalidArgument("run_gait: n_steps must be at least 1");
  const Controller controller = make_controller(setup.controller);
  NoiseSource noise(setup.noise.seed);

  GaitLog log;
  Trajectory* sink = setup.record_trajectory ? &log.trajectory : nullptr;
  FlightState state = initial;
  double t = 0.0;
  double leg = setup.servo.attack_angle;
  double work = 0.0;

  for (int i = 0; i < n_steps; ++i) {
    const double eps_td = noise.draw(setup.noise.touchdown_noise_fraction);
    const double eps_lo = noise.draw(setup.noise.liftoff_noise_fraction);
    try {
      const FlightResult fr = run_flight(state, t, leg, setup, eps_td, work, sink);
      const StanceResult sr = run_stance(fr, setup, controller, eps_lo, sink);
      StepRecord rec;
      rec.index = i;
      rec.apex = fr.apex;
      rec.touchdown = fr.touchdown;
      rec.liftoff = sr.liftoff;
      rec.reference = sr.reference;
      rec.foot_x = sr.foot_x;
      rec.e2_touchdown = sr.e2_touchdown;
      rec.e2_max = sr.e2_max;
      rec.e2_liftoff = sr.e2_liftoff;
      rec.saturated_steps = sr.saturated_steps;
      rec.stance_work = sr.nonconservative_work;
      log.steps.push_back(rec);
      work += sr.nonconservative_work;
      state = sr.liftoff.true_state;
      t = sr.liftoff.time;
      leg = sr.leg_angle;
    } catch (const GaitFailure& e) {
      log.failure = FailureInfo{i, e.reason(), e.what()};
      return log;
    }
  }
  try {
    log.final_apex = apex_after_liftoff(state, t, leg, setup, work);
  } catch (const GaitFailure& e) {
    log.failure = FailureInfo{n_steps, e.reason(), e.what()};
  }
  return log;
}

}  // namespace slip
