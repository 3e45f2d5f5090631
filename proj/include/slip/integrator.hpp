#pragma once

// Fixed-step classical RK4 with guard-crossing localization by bisection on
// the step fraction. State types are fixed-size Eigen vectors.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "slip/errors.hpp"

namespace slip {

struct IntegratorConfig {
  double step_size = 1e-4;        // s
  double event_tolerance = 1e-9;  // s, width of the accepted time bracket
  int max_bisection_iters = 60;
  double horizon = 10.0;          // s, give up looking for an event after this long

  void validate() const;
};

enum class Crossing { Falling, Rising, Either };

template <class State>
struct EventResult {
  State state;
  double time = 0.0;
  double guard_residual = 0.0;  // guard value at the returned state
  double bracket = 0.0;         // final time bracket width
  int steps = 0;                // full RK4 steps taken
  // max(|g|) over the two bracket ends, one entry per bisection iteration
  std::vector<double> residual_history;
};

template <class State>
using DerivativeFn = std::function<State(double, const State&)>;
template <class State>
using GuardFn = std::function<double(double, const State&)>;

template <class State>
struct EventSpec {
  GuardFn<State> guard;
  Crossing direction = Crossing::Falling;
  /// Crossings are ignored while this returns false. Empty means always armed.
  std::function<bool(double, const State&)> armed;
  /// Called before every full step with the step-start state. May throw to
  /// abort integration; used for zero-order-hold inputs and failure checks.
  std::function<void(double, const State&)> before_step;
  /// Called after every accepted full step (not for the final partial step).
  std::function<void(double, const State&)> after_step;
};

template <class State, class Deriv>
State step_rk4(double t, const State& s, Deriv&& f, double h) {
  const State k1 = f(t, s);
  const State k2 = f(t + 0.5 * h, State(s + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(s + (0.5 * h) * k2));
  const State k4 = f(t + h, State(s + h * k3));
  State out = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw IntegrationError("step_rk4: non-finite state");
  return out;
}

namespace detail {

inline bool crossed(double g0, double g1, Crossing dir) {
  switch (dir) {
    case Crossing::Falling: return g0 > 0.0 && g1 <= 0.0;
    case Crossing::Rising: return g0 < 0.0 && g1 >= 0.0;
    case Crossing::Either: return (g0 > 0.0 && g1 <= 0.0) || (g0 < 0.0 && g1 >= 0.0);
  }
  return false;
}

}  // namespace detail

/// Steps from (t0, s0) until the guard crosses zero in the requested
/// direction, then bisects the crossing step until the time bracket is no
/// wider than cfg.event_tolerance. The returned state is a secant estimate
/// inside the final bracket, so its residual is second order in the bracket.
template <class State, class Deriv>
EventResult<State> integrate_until_event(double t0, const State& s0, Deriv&& f,
                                         const EventSpec<State>& ev,
                                         const IntegratorConfig& cfg) {
  const double h = cfg.step_size;
  double t = t0;
  State s = s0;
  double g = ev.guard(t, s);
  EventResult<State> out;

  while (t - t0 < cfg.horizon) {
    if (ev.before_step) ev.before_step(t, s);
    const bool armed = !ev.armed || ev.armed(t, s);
    const State next = step_rk4(t, s, f, h);
    const double g_next = ev.guard(t + h, next);
    ++out.steps;

    if (armed && detail::crossed(g, g_next, ev.direction)) {
      // Bracket [lo, hi] on the step fraction, sub-stepping from (t, s).
      double lo = 0.0, hi = h;
      double g_lo = g, g_hi = g_next;
      State s_hi = next;
      out.residual_history.push_back(std::max(std::abs(g_lo), std::abs(g_hi)));
      for (int i = 0; i < cfg.max_bisection_iters && hi - lo > cfg.event_tolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        const State s_mid = step_rk4(t, s, f, mid);
        const double g_mid = ev.guard(t + mid, s_mid);
        if (detail::crossed(g_lo, g_mid, Crossing::Either) || g_mid == 0.0) {
          hi = mid;
          g_hi = g_mid;
          s_hi = s_mid;
        } else {
          lo = mid;
          g_lo = g_mid;
        }
        out.residual_history.push_back(std::max(std::abs(g_lo), std::abs(g_hi)));
      }
      out.bracket = hi - lo;
      double tau = hi;
      State s_ev = s_hi;
      double g_ev = g_hi;
      if (g_hi != 0.0 && g_lo != g_hi) {
        const double secant = lo + (hi - lo) * g_lo / (g_lo - g_hi);
        if (secant > lo && secant < hi) {
          const State s_sec = step_rk4(t, s, f, secant);
          const double g_sec = ev.guard(t + secant, s_sec);
          if (std::abs(g_sec) <= std::abs(g_hi)) {
            tau = secant;
            s_ev = s_sec;
            g_ev = g_sec;
          }
        }
      }
      out.state = s_ev;
      out.time = t + tau;
      out.guard_residual = g_ev;
      return out;
    }

    t += h;
    s = next;
    g = g_next;
    if (ev.after_step) ev.after_step(t, s);
  }
  throw EventTimeout("integrate_until_event: no event within " + std::to_string(cfg.horizon) +
                     " s");
}

inline void IntegratorConfig::validate() const {
  if (!(std::isfinite(step_size) && step_size > 0.0))
    throw InvalidArgument("invariant violated: IntegratorConfig.h > 0");
  if (!(event_tolerance > 0.0 && event_tolerance < step_size))
    throw InvalidArgument("invariant violated: IntegratorConfig.event_tolerance in (0, h)");
  const double needed = std::ceil(std::log2(step_size / event_tolerance));
  if (max_bisection_iters < needed)
    throw InvalidArgument(
        "invariant violated: IntegratorConfig.max_bisection_iters >= ceil(log2(h / "
        "event_tolerance))");
  if (!(horizon > 0.0)) throw InvalidArgument("invariant violated: IntegratorConfig.horizon > 0");
}

}  // namespace slip
