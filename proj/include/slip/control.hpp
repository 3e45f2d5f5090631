#pragma once

// Output tracking by feedback cancellation with a Luenberger observer.
//
// Plant state z = (x, xdot, y, ydot); outputs are the COM position (x, y).
// The actuator is a velocity source: u enters the position-rate rows, so CB
// is the identity and (A, C) is observable with the position-selecting C.
// Spring and gravity accelerations are a known drift d(z) that enters the
// velocity rows only (C d = 0), so it never appears in the output equation
// and is carried by the observer's model instead.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "slip/model.hpp"

namespace slip {

using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct LinearPlant {
  Mat4 A;
  Mat42 B;
  Mat24 C;
};

struct TrackingGains {
  double eta1 = -30.0;
  double eta2 = -30.0;
  Mat42 K;
  Mat2 CK;
};

/// Observer poles, two per position/velocity chain: {x-chain, x-chain, y-chain, y-chain}.
using ObserverPoles = std::array<double, 4>;

struct ObserverState {
  Vec4 x_hat = Vec4::Zero();
  Mat42 K_e = Mat42::Zero();
  ObserverPoles poles{-120.0, -120.0, -120.0, -120.0};
};

struct TrackingError {
  Vec4 e1 = Vec4::Zero();  // z - x_hat
  Vec2 e2 = Vec2::Zero();  // y_d - y
};

struct ControlOutput {
  Vec2 u = Vec2::Zero();
  Vec2 e2 = Vec2::Zero();
};

struct ErrorDynamics {
  Mat6 E;
  std::vector<std::complex<double>> eigenvalues;
  /// Largest distance between an eigenvalue of E and its partner in
  /// eig(A - K_e C) U eig(-CK).
  double block_mismatch = 0.0;
};

/// Drift d(z) added to A z + B u.
using DriftModel = std::function<Vec4(const Vec4&)>;

/// Velocity-source double-integrator plant. Throws InvalidArgument if CB is
/// singular or (A, C) is unobservable.
LinearPlant build_plant();

/// Gains placing eig(-CK) at {eta1, eta2} with k31 = k32 = 1 and rows 2, 4
/// zero. Throws InvalidArgument for non-negative eta.
TrackingGains tracking_gains(double eta1, double eta2);

/// Closed-form pole placement for the two decoupled position/velocity
/// chains. Throws InvalidArgument for non-negative poles or a plant without
/// that structure.
Mat42 observer_gains(const LinearPlant& plant, const ObserverPoles& poles);

ObserverState make_observer(const LinearPlant& plant, const ObserverPoles& poles,
                            const Vec4& initial_estimate);

/// x_hat' = A x_hat + B u + d(x_hat) + K_e (y_meas - C x_hat)
Vec4 observer_derivative(const LinearPlant& plant, const Mat42& K_e, const Vec4& x_hat,
                         const Vec2& u, const Vec2& y_meas, const DriftModel& drift);

/// One RK4 step of the observer with u and y_meas held over h.
ObserverState observer_update(const ObserverState& obs, const LinearPlant& plant, const Vec2& u,
                              const Vec2& y_meas, const DriftModel& drift, double h);

/// u = (CB)^-1 (ydot_d - C A x_hat + CK e2), e2 = y_d - y_meas.
///
/// Written with the projected gain CK. The bare K would add a 4-vector to
/// 2-vectors; CK is the term that yields the -CK block of the error dynamics.
ControlOutput control_law(const LinearPlant& plant, const TrackingGains& gains,
                          const Vec4& x_hat, const Vec2& y_d, const Vec2& y_d_dot,
                          const Vec2& y_meas);

/// E = [A - K_e C, 0; -CA, -CK] over (e1, e2), with its spectrum.
ErrorDynamics assemble_error_dynamics(const LinearPlant& plant, const TrackingGains& gains,
                                      const Mat42& K_e);

/// Roots of the 2x2 characteristic polynomial.
std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& m);

inline Vec4 plant_state(const FlightState& s) { return {s.x, s.vx, s.y, s.vy}; }
inline FlightState flight_state(const Vec4& z) { return {z[0], z[2], z[1], z[3]}; }

}  // namespace slip
