#pragma once

// Synthetic tracking scenarios, filter runners and Monte-Carlo statistics.
//
// Scenario 1: straight run with a registration step, a constant-radius
//             turn, a sharp heading change and alternating-frame jitter.
// Scenario 2: noise-free circular orbit about the origin.
// Scenario 3: noisy straight line at constant speed.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "augtrack/design.hpp"
#include "augtrack/types.hpp"

namespace augtrack {

struct ScenarioConfig {
  int id = 3;
  int n_frames = 190;
  real ts = 0.04L;
  real speed = 25.0L;   // pix/s
  real omega = 2.5L;    // rad/s
  real radius = 10.0L;  // pix
  real sigma_sns = 1.0L;
  std::uint64_t seed = 1;

  // Scenario 1 events (frame indices).
  int step_frame = 24;
  real step_offset = 10.0L;  // pix, added to the apparent y
  int turn_start = 75;
  int turn_end = 99;
  int heading_change_frame = 125;
  real heading_change_deg = 90.0L;  // counter-clockwise
  int jitter_start = 160;
  real jitter_amplitude = 10.0L;

  /// Defaults for a scenario id; sigma_sns is 0 for scenario 2.
  static ScenarioConfig defaults(int id);

  void validate() const;
};

/// Largest |lag| supported when scoring against delayed truth.
inline constexpr int kMaxTruthLag = 16;

struct ScenarioData {
  int n_frames = 0;
  // Truth used for scoring, stored for n in [-kMaxTruthLag, n_frames + kMaxTruthLag).
  Vector truth_x, truth_y;
  Vector meas_x, meas_y;  // n in [0, n_frames)

  real truth_xat(int n) const;
  real truth_yat(int n) const;
};

ScenarioData gen_scenario(const ScenarioConfig& cfg, std::uint64_t rep);

struct InitPolicy {
  enum class Kind { zero, step, explicit_state };
  Kind kind = Kind::zero;
  Vector state;

  static InitPolicy zero() { return {}; }
  static InitPolicy step() { return {Kind::step, {}}; }
  static InitPolicy from_state(Vector s) { return {Kind::explicit_state, std::move(s)}; }
};

// The direct-form runner keeps K transposed-direct-form-II registers:
//   y = b0 x + v0,  v_i = b_{i+1} x - a_{i+1} y + v_{i+1}.
Vector run_tf_filter(const TransferFunction& tf, const Vector& x,
                     const InitPolicy& init = InitPolicy::zero());

struct ObserverRun {
  Vector y;
  std::vector<Vector> states;  // w(n) after each update
};

ObserverRun run_ss_observer(const StateSpaceFilter& ss, const Vector& x,
                            const InitPolicy& init = InitPolicy::zero());

/// Registers of run_tf_filter at the fixed point for a constant input x0.
Vector init_step_state(const TransferFunction& tf, real x0);

/// Solution of (I - G) w = h x0.
Vector init_step_state(const StateSpaceFilter& ss, real x0);

struct KalmanOptions {
  real p0 = 1e6L;  // initial variance of position and velocity
  int lag_q = 0;   // output is position - q ts velocity
};

struct KalmanRun {
  Vector output;
  Vector position, velocity;
  std::vector<std::pair<real, real>> gains;  // (position, velocity) per update
};

// Two-state constant-velocity Kalman filter with white-noise-acceleration
// process noise Q = sq^2 [[ts^4/4, ts^3/2], [ts^3/2, ts^2]]. Initialized at
// (z0, 0); the first update has no prediction step.
KalmanRun run_variable_kf(const Vector& z, real sigma_q, real sigma_r, real ts,
                          KalmanOptions opts = {});

struct TerminalErrors {
  real eps_r = 0;          // mean radial error, circular scenario only
  real eps_theta_deg = 0;  // mean angular error, circular scenario only
  real dist = 0;           // RMS distance error over reps
};

struct FrameRecord {
  int n = 0;
  real truth_x = 0, truth_y = 0;
  real meas_x = 0, meas_y = 0;
  real est_x = 0, est_y = 0;
};

struct SimResult {
  std::string filter;
  int lag_q = 0;
  int n_rep = 0;
  real sigma_d = 0;  // RMS distance error over all frames and reps
  TerminalErrors terminal;
  std::vector<FrameRecord> frames;  // first repetition
};

std::vector<SimResult> mc_evaluate(const ScenarioConfig& cfg,
                                   const std::vector<FilterDesign>& filters, int n_rep,
                                   std::optional<int> delay_q = std::nullopt);

}  // namespace augtrack
