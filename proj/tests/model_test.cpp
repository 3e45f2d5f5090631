#include "slip/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "slip/errors.hpp"

namespace slip {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(ModelParams, RejectsNonPhysicalValues) {
  ModelParams p;
  EXPECT_NO_THROW(p.validate());
  p.mass = -1.0;
  try {
    p.validate();
    FAIL() << "negative mass accepted";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("ModelParams.m > 0"), std::string::npos);
  }
  p = ModelParams{};
  p.damping = -0.1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = ModelParams{};
  p.damping = 0.0;
  EXPECT_NO_THROW(p.validate());
  p.rest_length = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(FlightDerivative, BallisticSubstitution) {
  ModelParams p;
  p.gravity = 10.0;
  const FlightDerivative d = flight_derivative({0.0, 1.0, 1.0, 0.0}, p);
  EXPECT_EQ(d.x, 1.0);
  EXPECT_EQ(d.y, 0.0);
  EXPECT_EQ(d.vx, 0.0);
  EXPECT_EQ(d.vy, -10.0);

  p.gravity = 9.81;
  const FlightDerivative rest = flight_derivative({5.0, 2.0, 0.0, 0.0}, p);
  EXPECT_EQ(rest.x, 0.0);
  EXPECT_EQ(rest.y, 0.0);
  EXPECT_EQ(rest.vx, 0.0);
  EXPECT_EQ(rest.vy, -9.81);
}

TEST(StanceDerivative, VerticalUncompressedLegFeelsOnlyGravity) {
  ModelParams p;
  p.damping = 0.0;
  const StanceDerivative d = stance_derivative_passive({p.rest_length, kPi / 2, 0.0, 0.0, 0.0}, p);
  EXPECT_NEAR(d.r_dot, -p.gravity, 1e-15);
  EXPECT_NEAR(d.theta_dot, 0.0, 1e-14);
}

TEST(StanceDerivative, CompressedSpringArithmetic) {
  ModelParams p;
  p.mass = 1.0;
  p.stiffness = 100.0;
  p.damping = 0.0;
  p.gravity = 9.81;
  const StanceDerivative d = stance_derivative_passive({p.rest_length - 0.05, kPi / 2, 0.0, 0.0, 0.0}, p);
  EXPECT_NEAR(d.r_dot, -4.81, 1e-12);
}

TEST(StanceDerivative, RejectsZeroRadius) {
  EXPECT_THROW(stance_derivative_passive({0.0, 1.0, 0.0, 0.0, 0.0}, ModelParams{}), InvalidArgument);
}

// Cartesian forces on the mass, written out independently of the polar
// equations, then compared with the polar accelerations mapped to x-y.
TEST(StanceDerivative, AgreesWithCartesianForces) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    ModelParams p;
    p.mass = 1.0 + 10.0 * u(gen);
    p.stiffness = 500.0 + 5000.0 * u(gen);
    p.damping = 20.0 * u(gen);
    const StanceState s{0.1 + 0.2 * u(gen), 0.3 + 2.5 * u(gen), -2.0 + 4.0 * u(gen),
                        -5.0 + 10.0 * u(gen), -1.0 + 2.0 * u(gen)};
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    const double r_dot = s.r_dot;
    const double fx = (p.stiffness * (p.rest_length - s.r) - p.damping * r_dot) * c;
    const double fy = (p.stiffness * (p.rest_length - s.r) - p.damping * r_dot) * sn - p.mass * p.gravity;

    const StanceDerivative d = stance_derivative_passive(s, p);
    const double ax = d.r_dot * c - 2.0 * s.r_dot * s.theta_dot * sn - s.r * d.theta_dot * sn -
                      s.r * s.theta_dot * s.theta_dot * c;
    const double ay = d.r_dot * sn + 2.0 * s.r_dot * s.theta_dot * c + s.r * d.theta_dot * c -
                      s.r * s.theta_dot * s.theta_dot * sn;
    EXPECT_NEAR(ax, fx / p.mass, 1e-10);
    EXPECT_NEAR(ay, fy / p.mass, 1e-10);

    const FlightState f = stance_to_cartesian(s);
    const Vec2 a = stance_acceleration(Vec2(f.x - s.foot_x, f.y), Vec2(f.vx, f.vy), p);
    EXPECT_NEAR(a.x(), fx / p.mass, 1e-10);
    EXPECT_NEAR(a.y(), fy / p.mass, 1e-10);
  }
}

TEST(Spring, PotentialAndForce) {
  ModelParams p;
  EXPECT_EQ(spring_potential(p.rest_length, p), 0.0);
  EXPECT_EQ(spring_force(p.rest_length, p), 0.0);
  p.stiffness = 1000.0;
  EXPECT_NEAR(spring_potential(p.rest_length - 0.1, p), 5.0, 1e-12);
  EXPECT_NEAR(spring_force(p.rest_length - 0.1, p), 100.0, 1e-10);
}

TEST(Spring, ForceIsNegativePotentialSlope) {
  ModelParams p;
  for (double r : {0.1, 0.17, 0.25, 0.31}) {
    double prev = 0.0;
    for (double h : {1e-2, 5e-3}) {
      const double fd = -(spring_potential(r + h, p) - spring_potential(r - h, p)) / (2.0 * h);
      const double err = std::abs(fd - spring_force(r, p));
      // U is quadratic, so the central difference is exact up to rounding.
      EXPECT_LT(err, 1e-9);
      prev = err;
    }
    (void)prev;
  }
}

TEST(Transforms, VerticalLegExamples) {
  const FlightState rest = stance_to_cartesian({1.0, kPi / 2, 0.0, 0.0, 0.0});
  EXPECT_NEAR(rest.x, 0.0, 1e-15);
  EXPECT_NEAR(rest.y, 1.0, 1e-15);
  EXPECT_NEAR(rest.vx, 0.0, 1e-15);
  EXPECT_NEAR(rest.vy, 0.0, 1e-15);

  const FlightState swing = stance_to_cartesian({1.0, kPi / 2, 0.0, -1.0, 0.0});
  EXPECT_NEAR(swing.vx, 1.0, 1e-15);
  EXPECT_NEAR(swing.vy, 0.0, 1e-15);
}

TEST(Transforms, RoundTrip) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const StanceState s{0.05 + 0.3 * u(gen), 0.1 + 2.9 * u(gen), -3.0 + 6.0 * u(gen),
                        -8.0 + 16.0 * u(gen), -5.0 + 10.0 * u(gen)};
    const StanceState back = cartesian_to_stance(stance_to_cartesian(s), s.foot_x);
    EXPECT_NEAR(back.r, s.r, 1e-12);
    EXPECT_NEAR(back.theta, s.theta, 1e-12);
    EXPECT_NEAR(back.r_dot, s.r_dot, 1e-12);
    EXPECT_NEAR(back.theta_dot, s.theta_dot, 1e-12);
    EXPECT_EQ(back.foot_x, s.foot_x);
  }
  EXPECT_THROW(cartesian_to_stance({2.0, 0.0, 1.0, 1.0}, 2.0), InvalidArgument);
}

TEST(Transforms, PolarJacobianMatchesChainRule) {
  const StanceState s{0.21, 1.9, 0.4, -2.2, 0.3};
  const FlightState f = stance_to_cartesian(s);
  const Vec2 v = polar_jacobian(Vec2(f.x - s.foot_x, f.y)) * Vec2(s.r_dot, s.theta_dot);
  EXPECT_NEAR(v.x(), f.vx, 1e-14);
  EXPECT_NEAR(v.y(), f.vy, 1e-14);
}

TEST(Guards, ZeroOnTheSurface) {
  ModelParams p;
  const double angle = 1.9;
  EXPECT_NEAR(touchdown_guard({0.0, p.rest_length * std::sin(angle), 0.0, -1.0}, angle, p), 0.0, 1e-17);
  EXPECT_GT(touchdown_guard({0.0, 0.3, 0.0, -1.0}, angle, p), 0.0);
  EXPECT_EQ(liftoff_guard({p.rest_length, 1.2, 0.5, 0.0, 0.0}, p), 0.0);
  EXPECT_GT(liftoff_guard({0.2, 1.2, 0.5, 0.0, 0.0}, p), 0.0);
}

TEST(EnergyLedger, FlightApexIsHorizontalKineticPlusHeight) {
  ModelParams p;
  const EnergyLedger e = energy_ledger(HybridState{FlightPhase{{1.0, 0.3, 0.7, 0.0}, 1.8}, 0.0}, p);
  EXPECT_NEAR(e.kinetic, 0.5 * p.mass * 0.49, 1e-14);
  EXPECT_NEAR(e.gravitational, p.mass * p.gravity * 0.3, 1e-14);
  EXPECT_EQ(e.spring, 0.0);
  EXPECT_NEAR(e.hamiltonian, e.kinetic + e.gravitational, 1e-14);
}

TEST(EnergyLedger, StanceBottomDecomposition) {
  ModelParams p;
  const double r = 0.2;
  const double vh = 0.6;
  // vertical leg, no radial speed: the mass moves horizontally at r * |theta_dot|
  const StanceState s{r, kPi / 2, 0.0, -vh / r, 0.0};
  const EnergyLedger e = energy_ledger(HybridState{StancePhase{s}, 0.0}, p, 1.5);
  const double expected = 0.5 * p.mass * vh * vh + p.mass * p.gravity * r + spring_potential(r, p);
  EXPECT_NEAR(e.hamiltonian, expected, 1e-12);
  EXPECT_NEAR(e.hamiltonian, e.kinetic + e.gravitational + e.spring, 1e-15);
  EXPECT_EQ(e.nonconservative_work, 1.5);
}

TEST(HybridState, PhaseTagFollowsVariant) {
  HybridState h{FlightPhase{}, 0.0};
  EXPECT_TRUE(h.in_flight());
  h.phase = StancePhase{};
  EXPECT_FALSE(h.in_flight());
}

}  // namespace
}  // namespace slip
