#include "slip/integrator.hpp"

#include <Eigen/Core>
#include <cmath>

#include <gtest/gtest.h>

namespace slip {
namespace {

using V1 = Eigen::Matrix<double, 1, 1>;
using V2 = Eigen::Vector2d;  // (y, vy)

TEST(StepRk4, ZeroFieldLeavesStateUnchanged) {
  const V2 s(0.3, -1.2);
  const V2 out = step_rk4(0.0, s, [](double, const V2&) { return V2::Zero().eval(); }, 0.1);
  EXPECT_EQ(out, s);
}

TEST(StepRk4, LinearDecayMatchesPolynomial) {
  const V1 x0 = V1::Constant(1.0);
  const V1 x1 = step_rk4(0.0, x0, [](double, const V1& x) { return V1(-x); }, 0.1);
  // 1 + z + z^2/2 + z^3/6 + z^4/24 at z = -0.1
  const double z = -0.1;
  const double poly = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
  EXPECT_DOUBLE_EQ(x1[0], poly);
  EXPECT_NEAR(x1[0], 0.9048375, 1e-7);
}

TEST(StepRk4, FourthOrderOnNonPolynomialField) {
  // x' = -x^2 has x(t) = 1 / (1 + t) from x(0) = 1
  auto f = [](double, const V1& x) { return V1(-x[0] * x[0]); };
  auto error = [&](double h) {
    V1 x = V1::Constant(1.0);
    const int n = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i < n; ++i) x = step_rk4(i * h, x, f, h);
    return std::abs(x[0] - 0.5);
  };
  const double coarse = error(0.1);
  const double fine = error(0.05);
  EXPECT_GT(coarse / fine, 8.0);
}

TEST(StepRk4, BallisticIsExact) {
  const double g = 9.81;
  auto f = [g](double, const V2& s) { return V2(s[1], -g); };
  V2 s(1.0, 0.5);
  const double h = 1e-2;
  for (int i = 0; i < 100; ++i) s = step_rk4(i * h, s, f, h);
  EXPECT_NEAR(s[0], 1.0 + 0.5 - 0.5 * g, 1e-12);
  EXPECT_NEAR(s[1], 0.5 - g, 1e-12);
}

TEST(StepRk4, NonFiniteStateThrows) {
  auto f = [](double, const V1&) { return V1(V1::Constant(std::nan(""))); };
  EXPECT_THROW(step_rk4(0.0, V1(V1::Constant(1.0)), f, 0.1), IntegrationError);
}

TEST(IntegrateUntilEvent, LinearGuardUnderTrivialDynamics) {
  IntegratorConfig cfg;
  cfg.step_size = 1e-3;
  EventSpec<V1> ev;
  ev.guard = [](double t, const V1&) { return 1.0 - t; };
  const auto r = integrate_until_event(0.0, V1::Zero().eval(), [](double, const V1&) { return V1::Zero().eval(); },
                                       ev, cfg);
  EXPECT_NEAR(r.time, 1.0, cfg.event_tolerance);
  EXPECT_LE(r.bracket, cfg.event_tolerance);
}

TEST(IntegrateUntilEvent, BallisticDropToHalfHeight) {
  const double g = 9.81;
  IntegratorConfig cfg;
  EventSpec<V2> ev;
  ev.guard = [](double, const V2& s) { return s[0] - 0.5; };
  const auto r = integrate_until_event(0.0, V2(1.0, 0.0), [g](double, const V2& s) { return V2(s[1], -g); },
                                       ev, cfg);
  EXPECT_NEAR(r.time, std::sqrt(2.0 * 0.5 / g), 1e-9);
  EXPECT_NEAR(r.time, 0.319275, 1e-6);
  EXPECT_LT(std::abs(r.guard_residual), 1e-9);
}

TEST(IntegrateUntilEvent, WrongDirectionCrossingIsIgnored) {
  const double g = 9.81;
  IntegratorConfig cfg;
  EventSpec<V2> ev;
  ev.guard = [](double, const V2& s) { return s[0] - 0.5; };
  ev.direction = Crossing::Falling;
  // launched upward through the threshold from below: the rising crossing
  // must be skipped and the falling one found
  const double v0 = 4.0;
  const auto r = integrate_until_event(0.0, V2(0.0, v0), [g](double, const V2& s) { return V2(s[1], -g); },
                                       ev, cfg);
  const double expected = (v0 + std::sqrt(v0 * v0 - 2.0 * g * 0.5)) / g;
  EXPECT_NEAR(r.time, expected, 1e-9);
  EXPECT_LT(r.state[1], 0.0);
}

TEST(IntegrateUntilEvent, ResidualShrinksOverBisection) {
  IntegratorConfig cfg;
  cfg.step_size = 1e-2;
  EventSpec<V2> ev;
  ev.guard = [](double, const V2& s) { return s[0] - 0.5; };
  const auto r = integrate_until_event(0.0, V2(1.0, 0.0), [](double, const V2& s) { return V2(s[1], -9.81); },
                                       ev, cfg);
  ASSERT_GT(r.residual_history.size(), 2u);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    EXPECT_LE(r.residual_history[i], r.residual_history[i - 1]);
  EXPECT_LE(r.bracket, cfg.event_tolerance);
}

TEST(IntegrateUntilEvent, DisarmedCrossingIsIgnored) {
  IntegratorConfig cfg;
  cfg.step_size = 1e-3;
  EventSpec<V1> ev;
  ev.guard = [](double, const V1& s) { return std::cos(20.0 * s[0]); };
  ev.direction = Crossing::Either;
  ev.armed = [](double t, const V1&) { return t > 0.1; };
  const auto r = integrate_until_event(0.0, V1::Zero().eval(), [](double, const V1&) { return V1(V1::Constant(1.0)); },
                                       ev, cfg);
  // first zero of cos(20 t) is at pi/40 ~ 0.0785, the second at 3 pi / 40
  EXPECT_NEAR(r.time, 3.0 * M_PI / 40.0, 1e-9);
}

TEST(IntegrateUntilEvent, TimesOutWithoutCrossing) {
  IntegratorConfig cfg;
  cfg.step_size = 1e-2;
  cfg.horizon = 0.5;
  EventSpec<V1> ev;
  ev.guard = [](double, const V1&) { return 1.0; };
  EXPECT_THROW(integrate_until_event(0.0, V1::Zero().eval(), [](double, const V1&) { return V1::Zero().eval(); },
                                     ev, cfg),
               EventTimeout);
}

TEST(IntegrateUntilEvent, Deterministic) {
  IntegratorConfig cfg;
  EventSpec<V2> ev;
  ev.guard = [](double, const V2& s) { return s[0] - 0.123; };
  auto f = [](double, const V2& s) { return V2(s[1], -9.81 - 0.3 * s[1]); };
  const auto a = integrate_until_event(0.0, V2(1.0, 0.2), f, ev, cfg);
  const auto b = integrate_until_event(0.0, V2(1.0, 0.2), f, ev, cfg);
  EXPECT_EQ(a.time, b.time);
  EXPECT_EQ(a.state, b.state);
}

TEST(IntegratorConfig, Invariants) {
  IntegratorConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.event_tolerance = cfg.step_size;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = IntegratorConfig{};
  cfg.max_bisection_iters = 10;  // log2(1e-4 / 1e-9) ~ 16.6
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = IntegratorConfig{};
  cfg.step_size = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

}  // namespace
}  // namespace slip
