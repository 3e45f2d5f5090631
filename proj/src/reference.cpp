#include "slip/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "slip/errors.hpp"

namespace slip {

void GaitCommand::validate(const ModelParams& p) const {
  if (!(std::isfinite(v_des) && v_des > 0.0))
    throw InvalidArgument("invariant violated: GaitCommand.v_des > 0");
  if (!(attack_angle > std::numbers::pi / 2 && attack_angle < std::numbers::pi))
    throw InvalidArgument("invariant violated: GaitCommand.attack_angle in (pi/2, pi)");
  if (!(apex_des > p.rest_length * std::sin(attack_angle)))
    throw InvalidArgument("invariant violated: GaitCommand.apex_des > r0 sin(attack_angle)");
}

double compute_compression(double delta_h_apex, const ModelParams& p) {
  if (!(delta_h_apex >= 0.0))
    throw InvalidArgument("compute_compression: apex drop must be non-negative");
  return std::sqrt(2.0 * p.mass * p.gravity * delta_h_apex / p.stiffness);
}

StancePlan stance_waypoints(const GaitCommand& cmd, double foot_x, const ModelParams& p) {
  if (!(cmd.v_des > 0.0)) throw InvalidArgument("stance_waypoints: v_des must be positive");
  const double reach = p.rest_length * std::cos(cmd.attack_angle);
  const double y0 = p.rest_length * std::sin(cmd.attack_angle);
  const Waypoint touchdown{foot_x + reach, y0};
  const Waypoint takeoff{foot_x - reach, y0};
  if (!(takeoff.x > touchdown.x))
    throw InvalidArgument("stance_waypoints: attack angle gives no forward stance travel");

  StancePlan plan;
  plan.apex_drop = cmd.apex_des - y0;
  if (!(plan.apex_drop > 0.0))
    throw InvalidArgument("stance_waypoints: desired apex is not above touchdown height");
  plan.compression = compute_compression(plan.apex_drop, p);
  if (!(plan.compression > 0.0))
    throw InvalidArgument("stance_waypoints: zero compression gives a degenerate parabola");
  if (!(plan.compression < y0))
    throw InvalidArgument("stance_waypoints: planned compression drives the COM into the ground");

  plan.waypoints = {touchdown, Waypoint{foot_x, y0 - plan.compression}, takeoff};
  plan.t_stance = (takeoff.x - touchdown.x) / cmd.v_des;
  return plan;
}

ParabolaCoefficients fit_parabola(const Waypoint& w0, const Waypoint& w1, const Waypoint& w2) {
  if (w0.x == w1.x || w0.x == w2.x || w1.x == w2.x)
    throw InvalidArgument("fit_parabola: abscissae must be pairwise distinct");

  double m[3][4] = {{w0.x * w0.x, w0.x, 1.0, w0.y},
                    {w1.x * w1.x, w1.x, 1.0, w1.y},
                    {w2.x * w2.x, w2.x, 1.0, w2.y}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    if (m[pivot][col] == 0.0) throw InvalidArgument("fit_parabola: singular system");
    if (pivot != col)
      for (int k = 0; k < 4; ++k) std::swap(m[col][k], m[pivot][k]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
    }
  }
  double u[3];
  for (int row = 2; row >= 0; --row) {
    double acc = m[row][3];
    for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * u[k];
    u[row] = acc / m[row][row];
  }
  return {u[0], u[1], u[2]};
}

ReferenceTrajectory make_reference(const GaitCommand& cmd, const FlightState& touchdown,
                                   double start_time, const ModelParams& p) {
  const double foot_x = touchdown.x - p.rest_length * std::cos(cmd.attack_angle);
  const StancePlan plan = stance_waypoints(cmd, foot_x, p);
  ReferenceTrajectory ref;
  ref.waypoints = plan.waypoints;
  ref.coeffs = fit_parabola(plan.waypoints[0], plan.waypoints[1], plan.waypoints[2]);
  ref.t_stance = plan.t_stance;
  ref.v_h = cmd.v_des;
  ref.start_time = start_time;
  ref.compression = plan.compression;
  ref.apex_drop = plan.apex_drop;
  return ref;
}

ReferenceSample reference_output(const ReferenceTrajectory& traj, double t, Extrapolation mode) {
  ReferenceSample out;
  double tau = t - traj.start_time;
  if (tau < 0.0 || tau > traj.t_stance) {
    out.outside_window = true;
    if (mode == Extrapolation::Clamp) tau = std::clamp(tau, 0.0, traj.t_stance);
  }
  const auto& [a, b, c] = traj.coeffs;
  const double x = traj.waypoints[0].x + traj.v_h * tau;
  out.pos = {x, (a * x + b) * x + c};
  out.vel = {traj.v_h, (2.0 * a * x + b) * traj.v_h};
  out.acc = {0.0, 2.0 * a * traj.v_h * traj.v_h};
  return out;
}

}  // namespace slip
