#pragma once

// Point-mass spring-loaded inverted pendulum: parameters, phase states,
// passive dynamics, guard surfaces, and energy bookkeeping.
//
// Conventions: the ground is flat at y = 0. In stance the foot is pinned at
// (foot_x, 0); theta is the leg angle measured from the +x ground direction,
// so forward travel corresponds to theta decreasing through pi/2.

#include <Eigen/Core>
#include <variant>

namespace slip {

using Vec2 = Eigen::Vector2d;

struct ModelParams {
  double mass = 6.0;         // kg
  double stiffness = 2200.;  // N/m
  double rest_length = 0.25; // m
  double damping = 5.0;      // N s/m, radial, stance only
  double gravity = 9.81;     // m/s^2

  /// Throws InvalidArgument naming the violated field.
  void validate() const;
};

struct FlightState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

struct StanceState {
  double r = 0.0;
  double theta = 0.0;
  double r_dot = 0.0;
  double theta_dot = 0.0;
  double foot_x = 0.0;
};

/// Time derivative of (x, y, vx, vy).
struct FlightDerivative {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

/// Time derivative of (r, theta, r_dot, theta_dot). The foot does not move.
struct StanceDerivative {
  double r = 0.0;
  double theta = 0.0;
  double r_dot = 0.0;
  double theta_dot = 0.0;
};

struct FlightPhase {
  FlightState body;
  double leg_angle = 0.0;
};

struct StancePhase {
  StanceState body;
};

/// Phase tag and body are one variant, so they cannot disagree.
struct HybridState {
  std::variant<FlightPhase, StancePhase> phase;
  double time = 0.0;

  bool in_flight() const { return std::holds_alternative<FlightPhase>(phase); }
};

struct EnergyLedger {
  double kinetic = 0.0;
  double gravitational = 0.0;
  double spring = 0.0;
  double hamiltonian = 0.0;
  double nonconservative_work = 0.0;
};

FlightDerivative flight_derivative(const FlightState& s, const ModelParams& p);

/// Passive stance equations of motion in polar coordinates about the foot.
/// Throws InvalidArgument when r <= 0.
StanceDerivative stance_derivative_passive(const StanceState& s, const ModelParams& p);

/// U(r) = k (r0 - r)^2 / 2
double spring_potential(double r, const ModelParams& p);

/// -dU/dr, positive when the compressed spring pushes the mass away from the foot.
double spring_force(double r, const ModelParams& p);

FlightState stance_to_cartesian(const StanceState& s);

/// Throws InvalidArgument when the mass sits exactly on the foot.
StanceState cartesian_to_stance(const FlightState& f, double foot_x);

/// Cartesian acceleration of the mass in stance from spring, radial damping
/// and gravity. `offset` is the mass position relative to the foot.
Vec2 stance_acceleration(const Vec2& offset, const Vec2& velocity, const ModelParams& p);

/// Jacobian of (x, y) with respect to (r, theta) at the given offset from the foot.
Eigen::Matrix2d polar_jacobian(const Vec2& offset);

/// Positive above the touchdown height r0 sin(leg_angle); touchdown is a
/// falling zero crossing.
double touchdown_guard(const FlightState& f, double leg_angle, const ModelParams& p);

/// Positive while the leg is compressed; liftoff is a falling zero crossing.
double liftoff_guard(const StanceState& s, const ModelParams& p);

EnergyLedger energy_ledger(const HybridState& state, const ModelParams& p,
                           double nonconservative_work = 0.0);

}  // namespace slip
