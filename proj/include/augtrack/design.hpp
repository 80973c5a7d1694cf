#pragma once

// Observer design by pole placement through canonical coordinate
// transforms, and extraction of the equivalent direct-form filter.
//
// Pipeline:
//   process poly  A_prc(z)   = (z-1)^Kt (z^2 - 2cos(W Ts) z + 1)^Km (z+1)^Ki
//   observer poly A_obs(z)   = (z-p)^K
//   gain (PCF)    k_pcf      = g_prc - g_obs            (companion columns)
//   transform     T_kin<-pcf = O_prc_kin^{-1} O_prc_pcf
//   gain (kin)    k_kin      = T_kin<-pcf k_pcf
//   observer      G_obs_kin  = G_prc - k_kin c_prd
// The filter numerator is then read from the input vector of the observer
// canonical form (OCF) reached through T_kin<-ocf = O_obs_kin^{-1} O_obs_ocf.
//
// The transforms are badly conditioned for high orders with poles
// clustered near z = 1, so all of the above runs in 113-bit precision and
// results are rounded to `real` on the way out.

#include <optional>
#include <string>
#include <utility>

#include "augtrack/matrix.hpp"
#include "augtrack/models.hpp"
#include "augtrack/polynomial.hpp"
#include "augtrack/types.hpp"

namespace augtrack {

/// Direct-form coefficients of y(n) = sum b(k) x(n-k) - sum a(k) y(n-k).
struct TransferFunction {
  Vector b;  // length K+1, b[K] == 0 for the strictly proper observers
  Vector a;  // length K+1, a[0] == 1

  std::size_t order() const noexcept { return a.empty() ? 0 : a.size() - 1; }
  bool operator==(const TransferFunction&) const = default;
};

/// State-space filter w(n) = g w(n-1) + h x(n), y(n) = c w(n).
struct StateSpaceFilter {
  Matrix<real> g;
  Vector h;
  Vector c;

  std::size_t order() const noexcept { return h.size(); }
};

struct ObserverRealization {
  ModelSpec spec;
  Matrix<real> g_prc;      // process transition, kinematic coordinates
  Vector c_prd;            // predictor row
  Matrix<real> g_obs_kin;  // g_prc - gain_kin * c_prd
  Vector gain_kin;         // observer gain (= input vector h_obs)
  Vector c_obs_kin;        // smoothed-output row
  Matrix<real> t_kin_from_pcf;
  Matrix<real> t_pcf_from_kin;
  Polynomial process_poly;
  Polynomial observer_poly;
  Vector gain_pcf;

  StateSpaceFilter state_space() const { return {g_obs_kin, gain_kin, c_obs_kin}; }
};

/// Observer expressed in observer canonical form.
struct ObserverCanonicalForm {
  Matrix<real> t_kin_from_ocf;
  Matrix<real> t_ocf_from_kin;
  Matrix<real> g_ocf;  // companion matrix with the observer column
  Vector h_ocf;        // input vector, reversed numerator coefficients
};

Polynomial poly_from_unit_roots(const ModelSpec& spec);
Polynomial observer_poly(real pole, std::size_t order);

template <class T>
Matrix<T> observability_matrix(const std::vector<T>& c, const Matrix<T>& g) {
  const std::size_t n = g.rows();
  Matrix<T> o(n, c.size());
  std::vector<T> row = c;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < c.size(); ++j) o(k, j) = row[j];
    row = row * g;
  }
  return o;
}

ObserverRealization place_poles(const ModelSpec& spec);
ObserverCanonicalForm observer_canonical_form(const ObserverRealization& obs);
TransferFunction extract_transfer_function(const ObserverRealization& obs);

struct AlphaBetaGains {
  real alpha = 0;
  real beta = 0;
};

/// Steady-state alpha-beta gains for a tracking index Ts^2 sigma_Q / sigma_R.
AlphaBetaGains kalata_gains(real tracking_index);

/// Alpha-beta filter with output delayed by q samples.
TransferFunction alpha_beta_tf(real alpha, real beta, int q);

/// Kinematic state-space form of the same filter: gain [alpha, beta/ts].
StateSpaceFilter alpha_beta_state_space(real alpha, real beta, int q, real ts);

/// A designed filter together with how it was specified.
struct FilterDesign {
  enum class Kind { pole_placement, alpha_beta };

  std::string name;
  Kind kind = Kind::pole_placement;
  ModelSpec spec;  // for alpha-beta: k_tgt = 2, pole = sqrt(1 - alpha)
  std::optional<AlphaBetaGains> alpha_beta;
  std::optional<real> tracking_index;
  TransferFunction tf;
  StateSpaceFilter realization;
};

FilterDesign design_filter(const ModelSpec& spec, std::string name = {});
FilterDesign design_alpha_beta(AlphaBetaGains gains, int q, real ts, real omega,
                               std::string name = {});

}  // namespace augtrack
