#include "slip/model.hpp"

#include <cmath>
#include <string>

#include "slip/errors.hpp"

namespace slip {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(std::string("invariant violated: ") + what);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(mass) && mass > 0.0, "ModelParams.m > 0");
  require(std::isfinite(stiffness) && stiffness > 0.0, "ModelParams.k > 0");
  require(std::isfinite(rest_length) && rest_length > 0.0, "ModelParams.r0 > 0");
  require(std::isfinite(damping) && damping >= 0.0, "ModelParams.damping >= 0");
  require(std::isfinite(gravity) && gravity > 0.0, "ModelParams.g > 0");
}

FlightDerivative flight_derivative(const FlightState& s, const ModelParams& p) {
  return {s.vx, s.vy, 0.0, -p.gravity};
}

StanceDerivative stance_derivative_passive(const StanceState& s, const ModelParams& p) {
  if (!(s.r > 0.0)) throw InvalidArgument("stance_derivative_passive: r must be positive");
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  // m r'' = m r th'^2 - m g sin(th) - b r' - dU/dr
  const double r_ddot = s.r * s.theta_dot * s.theta_dot - p.gravity * sn -
                        (p.damping / p.mass) * s.r_dot + spring_force(s.r, p) / p.mass;
  // d/dt (m r^2 th') = -m g r cos(th), expanded. The minus sign belongs to
  // theta measured from +x; measured from -x the torque is m g r cos(th).
  const double theta_ddot = (-p.gravity * c - 2.0 * s.r_dot * s.theta_dot) / s.r;
  return {s.r_dot, s.theta_dot, r_ddot, theta_ddot};
}

double spring_potential(double r, const ModelParams& p) {
  const double d = p.rest_length - r;
  return 0.5 * p.stiffness * d * d;
}

double spring_force(double r, const ModelParams& p) { return p.stiffness * (p.rest_length - r); }

FlightState stance_to_cartesian(const StanceState& s) {
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  return {s.foot_x + s.r * c, s.r * sn, s.r_dot * c - s.r * s.theta_dot * sn,
          s.r_dot * sn + s.r * s.theta_dot * c};
}

StanceState cartesian_to_stance(const FlightState& f, double foot_x) {
  const double dx = f.x - foot_x;
  const double dy = f.y;
  const double r = std::hypot(dx, dy);
  if (!(r > 0.0)) throw InvalidArgument("cartesian_to_stance: mass coincides with the foot");
  const double r_dot = (dx * f.vx + dy * f.vy) / r;
  const double theta_dot = (dx * f.vy - dy * f.vx) / (r * r);
  return {r, std::atan2(dy, dx), r_dot, theta_dot, foot_x};
}

Vec2 stance_acceleration(const Vec2& offset, const Vec2& velocity, const ModelParams& p) {
  const double r = offset.norm();
  if (!(r > 0.0)) throw InvalidArgument("stance_acceleration: mass coincides with the foot");
  const Vec2 radial = offset / r;
  const double r_dot = radial.dot(velocity);
  const double radial_force = spring_force(r, p) - p.damping * r_dot;
  return radial * (radial_force / p.mass) - Vec2(0.0, p.gravity);
}

Eigen::Matrix2d polar_jacobian(const Vec2& offset) {
  const double r = offset.norm();
  const double c = offset.x() / r;
  const double sn = offset.y() / r;
  Eigen::Matrix2d j;
  j << c, -r * sn,
       sn, r * c;
  return j;
}

double touchdown_guard(const FlightState& f, double leg_angle, const ModelParams& p) {
  return f.y - p.rest_length * std::sin(leg_angle);
}

double liftoff_guard(const StanceState& s, const ModelParams& p) { return p.rest_length - s.r; }

EnergyLedger energy_ledger(const HybridState& state, const ModelParams& p,
                           double nonconservative_work) {
  EnergyLedger e;
  FlightState cart;
  if (const auto* fl = std::get_if<FlightPhase>(&state.phase)) {
    cart = fl->body;
  } else {
    const auto& st = std::get<StancePhase>(state.phase).body;
    cart = stance_to_cartesian(st);
    e.spring = spring_potential(st.r, p);
  }
  e.kinetic = 0.5 * p.mass * (cart.vx * cart.vx + cart.vy * cart.vy);
  e.gravitational = p.mass * p.gravity * cart.y;
  e.hamiltonian = e.kinetic + e.gravitational + e.spring;
  e.nonconservative_work = nonconservative_work;
  return e;
}

}  // namespace slip
