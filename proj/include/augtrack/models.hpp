#pragma once

// Deterministic process models: an integrating target, an undamped
// maneuver oscillator and a Nyquist interference model, stacked into one
// augmented process in that fixed order.

#include <cstddef>

#include "augtrack/matrix.hpp"
#include "augtrack/types.hpp"

namespace augtrack {

/// Design request for an augmented-state tracking filter.
struct ModelSpec {
  int k_tgt = 2;        // target (integrator) order, >= 1
  int k_man = 0;        // number of maneuver oscillator pairs, 0 or 1
  int k_int = 1;        // interference order, >= 0
  real ts = 0.04L;      // sampling period [s]
  real omega = 0.0L;    // maneuver turn rate [rad/s], required when k_man == 1
  real pole = 0.8L;     // repeated observer pole radius, 0 <= pole < 1
  int lag_q = 0;        // output delay in samples (negative predicts)
  int deriv_d = 0;      // output derivative order, 0 <= deriv_d < k_tgt

  std::size_t order() const noexcept {
    return static_cast<std::size_t>(k_tgt + 2 * k_man + k_int);
  }

  /// Throws augtrack::Error describing the first violated constraint.
  void validate() const;

  bool operator==(const ModelSpec&) const = default;
};

struct BlockDims {
  std::size_t target = 0;
  std::size_t maneuver = 0;  // 2 * k_man
  std::size_t interference = 0;

  std::size_t maneuver_offset() const noexcept { return target; }
  std::size_t interference_offset() const noexcept { return target + maneuver; }
  std::size_t total() const noexcept { return target + maneuver + interference; }
};

/// The augmented process: block-diagonal transition plus output rows.
struct DiscreteSystem {
  Matrix<real> g;
  Vector c_prc;   // process output row
  Vector c_prd;   // one-step-ahead predictor row, c_prc * g
  BlockDims dims;
};

/// Selector row for the smoothed (or differentiated) output.
struct OutputRow {
  Vector c_obs;
  int lag_q = 0;
  int deriv_d = 0;
};

enum class SignalBlock { target, maneuver };

// Upper-triangular Toeplitz transition of an order-k integrator over a
// time step `dt`: entry (i, i+j) = dt^j / j!. `dt` may be negative.
Matrix<real> integrator_transition(int k, real dt);

// Undamped oscillator transition over a time step `dt` (any sign).
Matrix<real> oscillator_transition(real omega, real dt);

Matrix<real> build_target_discrete(int k_tgt, real ts);
Matrix<real> build_maneuver_discrete(real omega, real ts);
Matrix<real> build_interference_discrete(int k_int, real ts);

DiscreteSystem augment_process(const ModelSpec& spec);

/// Signal-block transition for a time step of -q*ts, i.e. G^{-q}.
Matrix<real> signal_shift_matrix(SignalBlock block, int q, const ModelSpec& spec);

/// Continuous-time state matrices of the signal blocks.
Matrix<real> target_state_matrix(int k_tgt);
Matrix<real> maneuver_state_matrix(real omega);

OutputRow output_row(const ModelSpec& spec);

}  // namespace augtrack
