#pragma once

// Frequency- and time-domain analysis of direct-form filters and the
// steady-state tracking metrics derived from them.

#include <cstddef>
#include <string>
#include <vector>

#include "augtrack/design.hpp"
#include "augtrack/models.hpp"
#include "augtrack/types.hpp"

namespace augtrack {

/// H(e^{i omega}) = B/A, omega in rad/sample.
complex freq_response(const TransferFunction& tf, real omega);

/// c (zI - G)^{-1} h z at z = e^{i omega}: the same response computed
/// from a state-space filter.
complex state_space_response(const StateSpaceFilter& ss, real omega);

struct ImpulseResponseOptions {
  std::size_t max_samples = 1'000'000;
  real tail_tolerance = 1e-14L;
};

// Runs the recursion on a unit impulse until the energy of the last 8K
// samples drops below tail_tolerance times the total (checked from n = 10K).
Vector impulse_response(const TransferFunction& tf, ImpulseResponseOptions opts = {});

/// White-noise gain, sum h(n)^2.
real wng(const TransferFunction& tf);

/// (1/2pi) integral |H|^2 by the trapezoidal rule on `points` samples.
real wng_frequency_domain(const TransferFunction& tf, std::size_t points = 1u << 16);

/// (i omega/ts)^d e^{-i q omega}.
complex desired_response(real omega, int q, int d, real ts);

/// Maneuver-error-signal gain |H_d - H|^2 at omega_man; d must be 0.
real mesg(const TransferFunction& tf, real omega_man, int q, int d, real ts);

struct OrbitalErrors {
  real eps_r = 0;          // pix
  real eps_theta_deg = 0;  // degrees, in (-180, 180]
};

OrbitalErrors orbital_errors(const TransferFunction& tf, real omega_man, int q, real radius);

struct SigmaMetrics {
  real sigma_tgt = 0;
  real sigma_man = 0;
};

SigmaMetrics sigma_metrics(real wng, real mesg, real sigma_sns, real radius);

struct FlatnessResidual {
  real omega_c = 0;
  int order = 0;
  complex observed;
  complex expected;
  real residual = 0;

  bool passes() const;
};

// Derivatives d^l H / d omega^l at dc (l < k_tgt), at +-omega*ts
// (l < k_man) and at pi (l < k_int), compared against the desired response.
std::vector<FlatnessResidual> flatness_residuals(const TransferFunction& tf,
                                                 const ModelSpec& spec);

struct ResponseExtrema {
  real h_inf_sq = 0;
  real omega_max = 0;
};

ResponseExtrema response_extrema(const TransferFunction& tf, std::size_t grid_n = 4096);

inline real to_db(real x) { return 10.0L * std::log10(x); }

struct AnalysisOptions {
  real omega_man = -1;  // rad/sample; negative means omega * ts from the spec
  real sigma_sns = 1;
  real radius = 10;
  std::size_t extrema_grid = 4096;
};

struct MetricsReport {
  real wng = 0;
  real wng_db = 0;
  real wng_freq = 0;
  real mesg = 0;  // NaN for derivative outputs
  real mesg_db = 0;
  real sigma_tgt = 0;
  real sigma_man = 0;
  real eps_r = 0;
  real eps_theta_deg = 0;
  real h_inf_sq = 0;
  real omega_max = 0;
  real omega_man = 0;
  std::vector<FlatnessResidual> flatness;
};

MetricsReport analyze(const TransferFunction& tf, const ModelSpec& spec,
                      const AnalysisOptions& opts = {});

struct ResponseRow {
  real f = 0;  // cycles/sample
  real omega = 0;
  real mag = 0;
  real mag_db = 0;  // 20 log10 |H|
  real phase_rad = 0;
  real phase_err_rad = 0;  // arg H + q omega, wrapped
};

std::vector<ResponseRow> response_table(const TransferFunction& tf, int q, std::size_t rows);

/// Wraps an angle in radians to (-pi, pi].
real wrap_angle(real radians);

}  // namespace augtrack
