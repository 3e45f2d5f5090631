#pragma once

// Hybrid gait executor: ballistic flight with a leg-angle servo, then a
// tracked stance, repeated. Touchdown and liftoff listeners can fire early
// or late by perturbing their guard thresholds.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slip/control.hpp"
#include "slip/errors.hpp"
#include "slip/integrator.hpp"
#include "slip/model.hpp"
#include "slip/reference.hpp"

namespace slip {

struct ServoConfig {
  double attack_angle = 1.8325957;  // rad
  double time_constant = 0.0;       // s, 0 snaps the leg to the target at liftoff
  double velocity_gain = 0.0;       // rad per (m/s) of forward-speed error

  void validate() const;
};

enum class NoiseDistribution { UniformSymmetric };

struct NoiseConfig {
  double touchdown_noise_fraction = 0.0;
  double liftoff_noise_fraction = 0.0;
  std::uint64_t seed = 0;
  NoiseDistribution distribution = NoiseDistribution::UniformSymmetric;

  void validate() const;
};

struct ControllerConfig {
  double eta1 = -30.0;
  double eta2 = -30.0;
  ObserverPoles observer_poles{-120.0, -120.0, -120.0, -120.0};
  double actuator_limit = 2.0;  // m/s on leg extension rate and on r * leg angle rate
  double crush_fraction = 0.3;  // stance fails when r <= crush_fraction * r0
  bool enabled = true;

  void validate() const;
};

struct GaitSetup {
  ModelParams model;
  GaitCommand command;
  ServoConfig servo;
  NoiseConfig noise;
  IntegratorConfig integrator;
  ControllerConfig controller;
  int output_decimation = 10;  // keep every n-th integrator step in the trajectory
  bool record_trajectory = true;

  void validate() const;
};

/// Plant, gains and observer gain assembled once per setup.
struct Controller {
  LinearPlant plant;
  TrackingGains gains;
  Mat42 K_e;
  ControllerConfig config;
};

Controller make_controller(const ControllerConfig& cfg);

/// Uniform-symmetric multiplicative threshold noise. Each draw consumes the
/// same number of generator outputs regardless of the fraction, so runs at
/// different noise levels with one seed see proportional perturbations.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : gen_(seed) {}
  double draw(double fraction);

 private:
  std::mt19937_64 gen_;
};

enum class PhaseTag { Flight, Stance };

struct TrajectorySample {
  double time = 0.0;
  PhaseTag phase = PhaseTag::Flight;
  FlightState body;
  // stance-only columns, NaN in flight
  double r = 0.0;
  double theta = 0.0;
  Vec2 u = Vec2::Zero();
  Vec2 e2 = Vec2::Zero();
  double hamiltonian = 0.0;
};

using Trajectory = std::vector<TrajectorySample>;

struct ApexRecord {
  double y = 0.0;
  double vx = 0.0;
  double time = 0.0;
  EnergyLedger energy;
};

struct EventRecord {
  FlightState true_state;
  FlightState perceived_state;
  double time = 0.0;
  double perceived_time = 0.0;
  double noise = 0.0;           // threshold perturbation fraction that was applied
  double guard_residual = 0.0;  // guard value at the localized true event
};

struct FlightResult {
  ApexRecord apex;
  EventRecord touchdown;
  double leg_angle = 0.0;  // at touchdown
};

struct StanceResult {
  EventRecord liftoff;
  ReferenceTrajectory reference;
  double foot_x = 0.0;
  double leg_angle = 0.0;  // theta at liftoff
  double e2_touchdown = 0.0;
  double e2_max = 0.0;
  double e2_liftoff = 0.0;
  int saturated_steps = 0;
  double nonconservative_work = 0.0;  // over this stance, liftoff impulse included
};

struct StepRecord {
  int index = 0;
  ApexRecord apex;
  EventRecord touchdown;
  EventRecord liftoff;
  ReferenceTrajectory reference;
  double foot_x = 0.0;
  double e2_touchdown = 0.0;
  double e2_max = 0.0;
  double e2_liftoff = 0.0;
  int saturated_steps = 0;
  double stance_work = 0.0;
};

struct FailureInfo {
  int step = 0;
  FailureReason reason = FailureReason::NonFinite;
  std::string message;
};

struct GaitLog {
  std::vector<StepRecord> steps;
  Trajectory trajectory;
  std::optional<FailureInfo> failure;
  /// Apex reached after the last completed stance, when the run did not fail.
  std::optional<ApexRecord> final_apex;
};

/// Flight from `start` at time t0: apex, true touchdown, and the touchdown
/// the listener reports when its threshold is scaled by (1 + noise).
/// `work_so_far` is carried into the apex energy ledger.
FlightResult run_flight(const FlightState& start, double t0, double leg_angle,
                        const GaitSetup& setup, double noise, double work_so_far = 0.0,
                        Trajectory* sink = nullptr);

/// Tracked stance from a true touchdown with the reference and observer
/// seeded from the perceived touchdown.
StanceResult run_stance(const FlightResult& flight, const GaitSetup& setup,
                        const Controller& controller, double liftoff_noise,
                        Trajectory* sink = nullptr);

/// Alternates flight and stance n_steps times. Failures end the log with a
/// reason instead of throwing.
GaitLog run_gait(const FlightState& initial, const GaitSetup& setup, int n_steps);

/// Apex state for a flight starting at (0, y) with forward speed vx.
inline FlightState apex_flight_state(double y, double vx) { return {0.0, y, vx, 0.0}; }

}  // namespace slip
