#include "augtrack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>

#include "augtrack/detail/quad.hpp"
#include "augtrack/error.hpp"

namespace augtrack {
namespace {

using detail::quad;
using detail::quad_complex;

void check_tf(const TransferFunction& tf) {
  if (tf.a.empty() || tf.b.empty()) throw Error(ErrorCode::invalid_spec, "empty transfer function");
  if (tf.a[0] != 1.0L) throw Error(ErrorCode::invalid_spec, "denominator must have a[0] = 1");
}

// sum c[k] z^-k for z on the unit circle, in working precision.
complex eval_delay_poly(const Vector& c, complex zinv) {
  complex acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * zinv + c[k];
  return acc;
}

complex response_ld(const TransferFunction& tf, real omega) {
  const complex zinv = std::polar(1.0L, -omega);
  const complex den = eval_delay_poly(tf.a, zinv);
  if (std::abs(den) < 1e-300L) throw Error(ErrorCode::evaluation_on_pole, "A(e^{iw}) vanishes");
  return eval_delay_poly(tf.b, zinv) / den;
}

quad_complex unit_phasor(const quad& angle) { return {cos(angle), sin(angle)}; }

quad_complex eval_delay_poly_q(const Vector& c, const quad_complex& zinv) {
  quad_complex acc(0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * zinv + quad_complex(quad(c[k]));
  return acc;
}

complex to_complex(const quad_complex& z) {
  return {static_cast<real>(z.real()), static_cast<real>(z.imag())};
}

quad_complex ipow(const quad_complex& z, int n) {
  quad_complex r(1);
  for (int k = 0; k < n; ++k) r *= z;
  return r;
}

// Taylor coefficients in delta of sum_k c[k] e^{-ik(w + delta)}.
std::vector<quad_complex> delay_poly_series(const Vector& c, const quad& w, int terms) {
  std::vector<quad_complex> out(static_cast<std::size_t>(terms), quad_complex(0));
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0L) continue;
    const quad_complex step(0, -quad(k));  // -ik
    quad_complex term = quad_complex(quad(c[k])) * unit_phasor(-quad(k) * w);
    for (int m = 0; m < terms; ++m) {
      out[static_cast<std::size_t>(m)] += term;
      term = term * step / quad(m + 1);
    }
  }
  return out;
}

// d^l H / d omega^l at w for l < terms, from the series quotient B/A.
std::vector<quad_complex> response_derivatives(const TransferFunction& tf, const quad& w,
                                               int terms) {
  const auto beta = delay_poly_series(tf.b, w, terms);
  const auto alpha = delay_poly_series(tf.a, w, terms);
  if (abs(alpha[0]) < quad("1e-300"))
    throw Error(ErrorCode::evaluation_on_pole, "A(e^{iw}) vanishes");
  std::vector<quad_complex> eta(static_cast<std::size_t>(terms));
  quad fact = 1;
  std::vector<quad_complex> deriv(static_cast<std::size_t>(terms));
  for (std::size_t m = 0; m < eta.size(); ++m) {
    quad_complex s = beta[m];
    for (std::size_t j = 1; j <= m; ++j) s -= alpha[j] * eta[m - j];
    eta[m] = s / alpha[0];
    if (m > 0) fact *= quad(m);
    deriv[m] = eta[m] * fact;
  }
  return deriv;
}

quad binomial(int n, int k) {
  quad r = 1;
  for (int j = 1; j <= k; ++j) r = r * quad(n - k + j) / quad(j);
  return r;
}

// l-th derivative of (i w/ts)^d e^{-iqw}.
quad_complex desired_derivative(const quad& w, int q, int d, const quad& ts, int l) {
  const quad_complex i_over_ts(0, 1 / ts);
  const quad_complex minus_iq(0, -quad(q));
  quad_complex sum(0);
  for (int j = 0; j <= std::min(l, d); ++j) {
    // j-th derivative of w^d is d!/(d-j)! w^{d-j}
    quad falling = 1;
    for (int t = 0; t < j; ++t) falling *= quad(d - t);
    const quad_complex f = ipow(i_over_ts, d) * falling * ipow(quad_complex(w), d - j);
    const quad_complex g = ipow(minus_iq, l - j) * unit_phasor(-quad(q) * w);
    sum += binomial(l, j) * f * g;
  }
  return sum;
}

complex freq_response_q(const TransferFunction& tf, real omega) {
  const quad_complex zinv = unit_phasor(-quad(omega));
  const quad_complex den = eval_delay_poly_q(tf.a, zinv);
  if (abs(den) < quad("1e-300")) throw Error(ErrorCode::evaluation_on_pole, "A(e^{iw}) vanishes");
  return to_complex(eval_delay_poly_q(tf.b, zinv) / den);
}

}  // namespace

real wrap_angle(real radians) {
  real r = std::remainder(radians, 2.0L * kPi);
  if (r <= -kPi) r += 2.0L * kPi;
  return r;
}

complex freq_response(const TransferFunction& tf, real omega) {
  check_tf(tf);
  return freq_response_q(tf, omega);
}

complex state_space_response(const StateSpaceFilter& ss, real omega) {
  const std::size_t n = ss.order();
  const complex z = std::polar(1.0L, omega);
  Matrix<complex> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? z : complex(0)) - ss.g(i, j);
  std::vector<complex> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = ss.h[i] * z;
  // Gaussian elimination with partial pivoting, then back substitution.
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m(i, c)) > std::abs(m(p, c))) p = i;
    if (std::abs(m(p, c)) == 0.0L)
      throw Error(ErrorCode::evaluation_on_pole, "zI - G is singular");
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      std::swap(x[p], x[c]);
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      const complex f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
      x[i] -= f * x[c];
    }
  }
  complex y = 0;
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= m(i, j) * x[j];
    x[i] /= m(i, i);
    y += ss.c[i] * x[i];
  }
  return y;
}

Vector impulse_response(const TransferFunction& tf, ImpulseResponseOptions opts) {
  check_tf(tf);
  const std::size_t k_order = std::max<std::size_t>(tf.order(), 1);
  const std::size_t start = 10 * k_order;
  const std::size_t window = 8 * k_order;
  Vector h;
  real total = 0;
  for (std::size_t n = 0; n < opts.max_samples; ++n) {
    real v = n < tf.b.size() ? tf.b[n] : 0.0L;
    for (std::size_t k = 1; k < tf.a.size() && k <= n; ++k) v -= tf.a[k] * h[n - k];
    h.push_back(v);
    total += v * v;
    if (n + 1 >= start) {
      real tail = 0;
      for (std::size_t j = h.size() - window; j < h.size(); ++j) tail += h[j] * h[j];
      if (tail <= opts.tail_tolerance * total) return h;
    }
  }
  throw Error(ErrorCode::no_convergence,
              "impulse response tail did not decay within " + std::to_string(opts.max_samples) +
                  " samples");
}

real wng(const TransferFunction& tf) {
  real s = 0;
  for (real v : impulse_response(tf)) s += v * v;
  return s;
}

real wng_frequency_domain(const TransferFunction& tf, std::size_t points) {
  check_tf(tf);
  if (points < 2) points = 2;
  // Periodic trapezoid rule over [0, 2pi): every node has unit weight.
  real s = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const real w = 2.0L * kPi * static_cast<real>(k) / static_cast<real>(points);
    s += std::norm(response_ld(tf, w));
  }
  return s / static_cast<real>(points);
}

complex desired_response(real omega, int q, int d, real ts) {
  return to_complex(desired_derivative(quad(omega), q, d, quad(ts), 0));
}

real mesg(const TransferFunction& tf, real omega_man, int q, int d, real ts) {
  if (d != 0) throw Error(ErrorCode::unsupported_derivative, "MESG is defined for d = 0 only");
  return std::norm(desired_response(omega_man, q, d, ts) - freq_response(tf, omega_man));
}

OrbitalErrors orbital_errors(const TransferFunction& tf, real omega_man, int q, real radius) {
  const complex h = freq_response(tf, omega_man);
  OrbitalErrors e;
  e.eps_r = (std::abs(h) - 1.0L) * radius;
  e.eps_theta_deg =
      wrap_angle(std::arg(h) + static_cast<real>(q) * omega_man) * 180.0L / kPi;
  if (e.eps_theta_deg <= -180.0L) e.eps_theta_deg += 360.0L;
  return e;
}

SigmaMetrics sigma_metrics(real wng_value, real mesg_value, real sigma_sns, real radius) {
  return {std::sqrt(2.0L * wng_value) * sigma_sns, std::sqrt(mesg_value) * radius};
}

bool FlatnessResidual::passes() const { return residual <= 1e-6L * (1.0L + std::abs(expected)); }

std::vector<FlatnessResidual> flatness_residuals(const TransferFunction& tf,
                                                 const ModelSpec& spec) {
  check_tf(tf);
  const quad ts = spec.ts;
  std::vector<FlatnessResidual> out;
  auto add = [&](const quad& w, int count, bool null_target) {
    if (count <= 0) return;
    const auto deriv = response_derivatives(tf, w, count);
    for (int l = 0; l < count; ++l) {
      const quad_complex want =
          null_target ? quad_complex(0) : desired_derivative(w, spec.lag_q, spec.deriv_d, ts, l);
      FlatnessResidual r;
      r.omega_c = static_cast<real>(w);
      r.order = l;
      r.observed = to_complex(deriv[static_cast<std::size_t>(l)]);
      r.expected = to_complex(want);
      r.residual = static_cast<real>(abs(deriv[static_cast<std::size_t>(l)] - want));
      out.push_back(r);
    }
  };
  add(quad(0), spec.k_tgt, false);
  if (spec.k_man > 0) {
    const quad wm = quad(spec.omega) * ts;
    add(wm, spec.k_man, false);
    add(-wm, spec.k_man, false);
  }
  if (spec.k_int > 0) add(quad(boost::math::constants::pi<quad>()), spec.k_int, true);
  return out;
}

ResponseExtrema response_extrema(const TransferFunction& tf, std::size_t grid_n) {
  check_tf(tf);
  grid_n = std::max<std::size_t>(grid_n, 2);
  const real step = kPi / static_cast<real>(grid_n - 1);
  auto mag2 = [&](real w) { return std::norm(response_ld(tf, w)); };
  const real tie = 1e-12L;

  std::size_t best = 0;
  real best_val = mag2(0);
  for (std::size_t i = 1; i < grid_n; ++i) {
    const real v = mag2(step * static_cast<real>(i));
    if (v > best_val * (1.0L + tie)) {
      best = i;
      best_val = v;
    }
  }

  // Golden-section search on the bracket around the best grid node.
  real lo = step * static_cast<real>(best == 0 ? 0 : best - 1);
  real hi = step * static_cast<real>(std::min(best + 1, grid_n - 1));
  const real inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  real x1 = hi - inv_phi * (hi - lo);
  real x2 = lo + inv_phi * (hi - lo);
  real f1 = mag2(x1), f2 = mag2(x2);
  while (hi - lo > 1e-10L) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = mag2(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = mag2(x2);
    }
  }
  const real w = 0.5L * (lo + hi);
  const real v = mag2(w);
  if (v > best_val * (1.0L + tie)) return {v, w};
  return {best_val, step * static_cast<real>(best)};
}

MetricsReport analyze(const TransferFunction& tf, const ModelSpec& spec,
                      const AnalysisOptions& opts) {
  MetricsReport r;
  r.omega_man = opts.omega_man >= 0 ? opts.omega_man : spec.omega * spec.ts;
  r.wng = wng(tf);
  r.wng_db = to_db(r.wng);
  r.wng_freq = wng_frequency_domain(tf);
  const real nan = std::numeric_limits<real>::quiet_NaN();
  if (spec.deriv_d == 0) {
    r.mesg = mesg(tf, r.omega_man, spec.lag_q, 0, spec.ts);
    r.mesg_db = to_db(r.mesg);
    const auto orb = orbital_errors(tf, r.omega_man, spec.lag_q, opts.radius);
    r.eps_r = orb.eps_r;
    r.eps_theta_deg = orb.eps_theta_deg;
  } else {
    r.mesg = r.mesg_db = r.eps_r = r.eps_theta_deg = nan;
  }
  const auto sig = sigma_metrics(r.wng, r.mesg, opts.sigma_sns, opts.radius);
  r.sigma_tgt = sig.sigma_tgt;
  r.sigma_man = sig.sigma_man;
  const auto ext = response_extrema(tf, opts.extrema_grid);
  r.h_inf_sq = ext.h_inf_sq;
  r.omega_max = ext.omega_max;
  r.flatness = flatness_residuals(tf, spec);
  return r;
}

std::vector<ResponseRow> response_table(const TransferFunction& tf, int q, std::size_t rows) {
  check_tf(tf);
  std::vector<ResponseRow> out;
  out.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    ResponseRow row;
    row.f = rows > 1 ? 0.5L * static_cast<real>(i) / static_cast<real>(rows - 1) : 0.0L;
    row.omega = 2.0L * kPi * row.f;
    const complex h = response_ld(tf, row.omega);
    row.mag = std::abs(h);
    row.mag_db = 20.0L * std::log10(row.mag);
    row.phase_rad = std::arg(h);
    row.phase_err_rad = wrap_angle(row.phase_rad + static_cast<real>(q) * row.omega);
    out.push_back(row);
  }
  return out;
}

}  // namespace augtrack
