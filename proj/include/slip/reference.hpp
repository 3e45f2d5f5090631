#pragma once

// Parabolic stance reference built from energy balance: the drop from the
// desired apex to touchdown height is stored in the spring as a compression
// dy_min with k dy_min^2 / 2 = m g dh_apex, and the COM is asked to pass
// through touchdown, bottom and mirrored takeoff points at constant forward
// speed.

#include <array>

#include "slip/model.hpp"

namespace slip {

struct GaitCommand {
  double v_des = 0.5;               // m/s
  double apex_des = 0.30;           // m
  double attack_angle = 1.8325957;  // rad, 105 deg

  void validate(const ModelParams& p) const;
};

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
};

struct StancePlan {
  std::array<Waypoint, 3> waypoints;  // touchdown, bottom, takeoff
  double t_stance = 0.0;
  double compression = 0.0;  // dy_min
  double apex_drop = 0.0;    // dh_apex
};

struct ParabolaCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct ReferenceTrajectory {
  ParabolaCoefficients coeffs;
  std::array<Waypoint, 3> waypoints;
  double t_stance = 0.0;
  double v_h = 0.0;
  double start_time = 0.0;
  double compression = 0.0;
  double apex_drop = 0.0;

  double end_time() const { return start_time + t_stance; }
  double bottom_time() const { return start_time + 0.5 * t_stance; }
};

enum class Extrapolation {
  Clamp,   // hold the endpoint and flag the sample
  Extend,  // keep evaluating the parabola at constant v_h, still flagged
};

struct ReferenceSample {
  Vec2 pos = Vec2::Zero();
  Vec2 vel = Vec2::Zero();
  Vec2 acc = Vec2::Zero();
  bool outside_window = false;
};

/// sqrt(2 m g dh / k). Throws InvalidArgument for negative dh.
double compute_compression(double delta_h_apex, const ModelParams& p);

/// Touchdown point, bottom below the foot, and takeoff point mirrored about
/// the foot, plus the time to cover the horizontal span at v_des. The
/// touchdown height comes from the leg geometry, not from a measured state.
/// Throws InvalidArgument for degenerate or infeasible geometry.
StancePlan stance_waypoints(const GaitCommand& cmd, double foot_x, const ModelParams& p);

/// Exact quadratic through three points with distinct abscissae (3x3
/// Vandermonde solve, partial pivoting). Throws InvalidArgument if singular.
ParabolaCoefficients fit_parabola(const Waypoint& w0, const Waypoint& w1, const Waypoint& w2);

/// Plan and fit for a touchdown observed at `touchdown`; the foot is placed
/// where a leg at cmd.attack_angle would meet the ground from that state.
ReferenceTrajectory make_reference(const GaitCommand& cmd, const FlightState& touchdown,
                                   double start_time, const ModelParams& p);

ReferenceSample reference_output(const ReferenceTrajectory& traj, double t,
                                 Extrapolation mode = Extrapolation::Clamp);

}  // namespace slip
