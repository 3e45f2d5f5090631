#include "slip/control.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slip/errors.hpp"

namespace slip {

namespace {

// Matches every eigenvalue in `a` to a distinct nearest eigenvalue in `b`
// and returns the worst distance. Greedy is adequate for the small spectra here.
double spectrum_mismatch(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& la : a) {
    auto best = b.begin();
    for (auto it = b.begin(); it != b.end(); ++it)
      if (std::abs(*it - la) < std::abs(*best - la)) best = it;
    worst = std::max(worst, std::abs(*best - la));
    b.erase(best);
  }
  return worst;
}

// Parlett-Reinsch balancing with power-of-two factors: an exact similarity
// that evens out row and column norms before the eigensolve.
template <int N>
Eigen::Matrix<double, N, N> balanced(Eigen::Matrix<double, N, N> m) {
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < N; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double total = c + r;
      double f = 1.0;
      while (c < r / radix) {
        f *= radix;
        c *= radix * radix;
      }
      while (c > r * radix) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * total) {
        done = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
  return m;
}

bool has_chain_structure(const LinearPlant& plant) {
  Mat4 a = Mat4::Zero();
  a(0, 1) = 1.0;
  a(2, 3) = 1.0;
  Mat24 c = Mat24::Zero();
  c(0, 0) = 1.0;
  c(1, 2) = 1.0;
  return plant.A == a && plant.C == c;
}

}  // namespace

LinearPlant build_plant() {
  LinearPlant plant;
  plant.A.setZero();
  plant.A(0, 1) = 1.0;  // xdot feeds x
  plant.A(2, 3) = 1.0;  // ydot feeds y
  plant.B.setZero();
  plant.B(0, 0) = 1.0;
  plant.B(2, 1) = 1.0;
  plant.C.setZero();
  plant.C(0, 0) = 1.0;
  plant.C(1, 2) = 1.0;

  const Mat2 cb = plant.C * plant.B;
  if (Eigen::FullPivLU<Mat2>(cb).rank() < 2)
    throw InvalidArgument("invariant violated: LinearPlant.CB invertible");
  Eigen::Matrix<double, 8, 4> obs;
  obs << plant.C, plant.C * plant.A, plant.C * plant.A * plant.A,
      plant.C * plant.A * plant.A * plant.A;
  if (Eigen::FullPivLU<Eigen::Matrix<double, 8, 4>>(obs).rank() < 4)
    throw InvalidArgument("invariant violated: LinearPlant (A, C) observable");
  return plant;
}

std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2& m) {
  const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  const std::complex<double> root = std::sqrt(std::complex<double>(half_diff * half_diff + m(0, 1) * m(1, 0)));
  return {half_trace - root, half_trace + root};
}

TrackingGains tracking_gains(double eta1, double eta2) {
  if (!(eta1 < 0.0 && eta2 < 0.0))
    throw InvalidArgument("tracking_gains: requested eigenvalues must be negative");
  TrackingGains g;
  g.eta1 = eta1;
  g.eta2 = eta2;
  // K = -[eta1+eta2+1, eta1+eta2+eta1*eta2+1; 0, 0; -1, -1; 0, 0]
  g.K.setZero();
  g.K(0, 0) = -(eta1 + eta2 + 1.0);
  g.K(0, 1) = -(eta1 + eta2 + eta1 * eta2 + 1.0);
  g.K(2, 0) = 1.0;
  g.K(2, 1) = 1.0;
  Mat24 c = Mat24::Zero();
  c(0, 0) = 1.0;
  c(1, 2) = 1.0;
  g.CK = c * g.K;

  // Check the characteristic polynomial of -CK rather than its roots: the
  // roots of a repeated pair are only determined to sqrt(eps).
  const Mat2 m = -g.CK;
  const double scale = 1.0 + std::abs(eta1) + std::abs(eta2) + std::abs(eta1 * eta2);
  const double trace_err = std::abs(m.trace() - (eta1 + eta2));
  const double det_err = std::abs(m.determinant() - eta1 * eta2);
  if (trace_err > 1e-12 * scale || det_err > 1e-12 * scale)
    throw InvalidArgument("tracking_gains: eig(-CK) does not match the requested values");
  return g;
}

Mat42 observer_gains(const LinearPlant& plant, const ObserverPoles& poles) {
  for (double p : poles)
    if (!(p < 0.0)) throw InvalidArgument("observer_gains: poles must be negative reals");
  if (!has_chain_structure(plant))
    throw InvalidArgument("observer_gains: plant is not two decoupled position/velocity chains");
  Eigen::Matrix<double, 8, 4> obs;
  obs << plant.C, plant.C * plant.A, plant.C * plant.A * plant.A,
      plant.C * plant.A * plant.A * plant.A;
  if (Eigen::FullPivLU<Eigen::Matrix<double, 8, 4>>(obs).rank() < 4)
    throw InvalidArgument("observer_gains: (A, C) is not observable");

  // Each chain [0 1; 0 0] with output [1 0] under gain (l1, l2) has
  // characteristic polynomial s^2 + l1 s + l2 = (s - p)(s - q).
  Mat42 ke = Mat42::Zero();
  ke(0, 0) = -(poles[0] + poles[1]);
  ke(1, 0) = poles[0] * poles[1];
  ke(2, 1) = -(poles[2] + poles[3]);
  ke(3, 1) = poles[2] * poles[3];
  return ke;
}

ObserverState make_observer(const LinearPlant& plant, const ObserverPoles& poles,
                            const Vec4& initial_estimate) {
  ObserverState obs;
  obs.x_hat = initial_estimate;
  obs.poles = poles;
  obs.K_e = observer_gains(plant, poles);
  return obs;
}

Vec4 observer_derivative(const LinearPlant& plant, const Mat42& K_e, const Vec4& x_hat,
                         const Vec2& u, const Vec2& y_meas, const DriftModel& drift) {
  Vec4 d = plant.A * x_hat + plant.B * u + K_e * (y_meas - plant.C * x_hat);
  if (drift) d += drift(x_hat);
  return d;
}

ObserverState observer_update(const ObserverState& obs, const LinearPlant& plant, const Vec2& u,
                              const Vec2& y_meas, const DriftModel& drift, double h) {
  if (!(h > 0.0)) throw InvalidArgument("observer_update: h must be positive");
  if (!y_meas.allFinite() || !u.allFinite())
    throw InvalidArgument("observer_update: non-finite measurement or input");
  auto f = [&](const Vec4& xh) { return observer_derivative(plant, obs.K_e, xh, u, y_meas, drift); };
  const Vec4 k1 = f(obs.x_hat);
  const Vec4 k2 = f(obs.x_hat + 0.5 * h * k1);
  const Vec4 k3 = f(obs.x_hat + 0.5 * h * k2);
  const Vec4 k4 = f(obs.x_hat + h * k3);
  ObserverState next = obs;
  next.x_hat = obs.x_hat + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return next;
}

ControlOutput control_law(const LinearPlant& plant, const TrackingGains& gains,
                          const Vec4& x_hat, const Vec2& y_d, const Vec2& y_d_dot,
                          const Vec2& y_meas) {
  ControlOutput out;
  out.e2 = y_d - y_meas;
  const Mat2 cb = plant.C * plant.B;
  out.u = cb.inverse() * (y_d_dot - plant.C * plant.A * x_hat + gains.CK * out.e2);
  return out;
}

ErrorDynamics assemble_error_dynamics(const LinearPlant& plant, const TrackingGains& gains,
                                      const Mat42& K_e) {
  ErrorDynamics out;
  const Mat4 observer_block = plant.A - K_e * plant.C;
  out.E.setZero();
  out.E.topLeftCorner<4, 4>() = observer_block;
  out.E.bottomLeftCorner<2, 4>() = -plant.C * plant.A;
  out.E.bottomRightCorner<2, 2>() = -gains.CK;

  Eigen::EigenSolver<Mat6> full(balanced<6>(out.E), false);
  for (int i = 0; i < 6; ++i) out.eigenvalues.push_back(full.eigenvalues()[i]);

  std::vector<std::complex<double>> blocks;
  Eigen::EigenSolver<Mat4> obs(balanced<4>(observer_block), false);
  for (int i = 0; i < 4; ++i) blocks.push_back(obs.eigenvalues()[i]);
  for (const auto& l : eigenvalues_2x2(-gains.CK)) blocks.push_back(l);
  out.block_mismatch = spectrum_mismatch(out.eigenvalues, blocks);

  // Repeated poles give defective blocks whose computed eigenvalues are only
  // good to about sqrt(eps) relative; anything beyond that is a real mismatch.
  const double scale = 1.0 + out.E.cwiseAbs().maxCoeff();
  if (!(out.block_mismatch <= 1e-6 * scale))
    throw InvalidArgument("assemble_error_dynamics: spectrum of E is not the union of its blocks");
  return out;
}

}  // namespace slip
