#include "augtrack/design.hpp"

#include <cmath>
#include <sstream>

#include "augtrack/detail/quad.hpp"
#include "augtrack/error.hpp"

namespace augtrack {
namespace {

using detail::quad;
using QVector = std::vector<quad>;
using QMatrix = Matrix<quad>;

std::string describe(const ModelSpec& s) {
  std::ostringstream os;
  os << "{k_tgt=" << s.k_tgt << ", k_man=" << s.k_man << ", k_int=" << s.k_int
     << ", omega=" << static_cast<double>(s.omega) << ", pole=" << static_cast<double>(s.pole)
     << ", q=" << s.lag_q << ", d=" << s.deriv_d << "}";
  return os.str();
}

QMatrix integrator_q(int k, const quad& dt) {
  const auto n = static_cast<std::size_t>(k);
  QMatrix g(n, n);
  quad term = 1;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i + j < n; ++i) g(i, i + j) = term;
    term = term * dt / quad(j + 1);
  }
  return g;
}

QMatrix oscillator_q(const quad& omega, const quad& dt) {
  const quad c = cos(omega * dt);
  const quad s = sin(omega * dt);
  return QMatrix{{c, s / omega}, {-omega * s, c}};
}

QMatrix nilpotent_shift_q(std::size_t n) {
  QMatrix a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1;
  return a;
}

// Same construction as the models module, carried out in quad.
struct QuadProcess {
  QMatrix g;
  QVector c_prd;
  QVector c_obs;
};

QuadProcess quad_process(const ModelSpec& spec) {
  const quad ts = spec.ts;
  const quad omega = spec.omega;
  const auto kt = static_cast<std::size_t>(spec.k_tgt);
  const std::size_t km = 2 * static_cast<std::size_t>(spec.k_man);
  const auto ki = static_cast<std::size_t>(spec.k_int);
  const std::size_t n = kt + km + ki;

  QuadProcess p;
  p.g = QMatrix(n, n);
  QVector c_prc(n, quad(0));
  p.g.set_block(0, 0, integrator_q(spec.k_tgt, ts));
  c_prc[0] = 1;
  if (km) {
    p.g.set_block(kt, kt, oscillator_q(omega, ts));
    c_prc[kt] = 1;
  }
  if (ki) {
    p.g.set_block(kt + km, kt + km, -integrator_q(spec.k_int, ts));
    c_prc[kt + km] = 1;
  }
  p.c_prd = c_prc * p.g;

  const quad shift = -quad(spec.lag_q) * ts;
  const auto d = static_cast<unsigned>(spec.deriv_d);
  p.c_obs.assign(n, quad(0));
  QVector sel(kt, quad(0));
  sel[0] = 1;
  const QVector tgt = sel * integrator_q(spec.k_tgt, shift) * power(nilpotent_shift_q(kt), d);
  std::copy(tgt.begin(), tgt.end(), p.c_obs.begin());
  if (km) {
    const QMatrix a_man{{quad(0), quad(1)}, {-omega * omega, quad(0)}};
    const QMatrix shift_man =
        spec.lag_q == 0 ? QMatrix::identity(2) : oscillator_q(omega, shift);
    const QVector man = QVector{quad(1), quad(0)} * shift_man * power(a_man, d);
    p.c_obs[kt] = man[0];
    p.c_obs[kt + 1] = man[1];
  }
  return p;
}

QVector process_poly_q(const ModelSpec& spec) {
  QVector a{quad(1)};
  for (int k = 0; k < spec.k_tgt; ++k) a = convolve(a, QVector{quad(1), quad(-1)});
  if (spec.k_man == 1) {
    const quad c = cos(quad(spec.omega) * quad(spec.ts));
    a = convolve(a, QVector{quad(1), -2 * c, quad(1)});
  }
  for (int k = 0; k < spec.k_int; ++k) a = convolve(a, QVector{quad(1), quad(1)});
  return a;
}

// Everything place_poles and the OCF extraction need, still in quad.
struct QuadDesign {
  QuadProcess proc;
  QVector a_prc, a_obs;
  QVector gain_pcf, gain_kin;
  QMatrix g_obs;
  QMatrix t_kin_from_pcf, t_pcf_from_kin;
};

QuadDesign quad_design(const ModelSpec& spec) {
  spec.validate();
  QuadDesign d;
  d.proc = quad_process(spec);
  const std::size_t n = spec.order();
  d.a_prc = process_poly_q(spec);
  d.a_obs = repeated_root_polynomial(quad(spec.pole), n);

  const QVector g_prc = companion_column(d.a_prc);
  const QVector g_obs = companion_column(d.a_obs);
  d.gain_pcf.resize(n);
  for (std::size_t k = 0; k < n; ++k) d.gain_pcf[k] = g_prc[k] - g_obs[k];

  const QMatrix o_kin = observability_matrix(d.proc.c_prd, d.proc.g);
  const QMatrix o_pcf = observability_matrix(last_state_selector<quad>(n), companion_matrix(g_prc));
  try {
    d.t_kin_from_pcf = solve(o_kin, o_pcf);
  } catch (const SingularMatrixError& e) {
    std::ostringstream os;
    os << "process observability matrix is singular (column " << e.column << ", pivot ratio "
       << e.pivot_ratio << ") for " << describe(spec);
    throw Error(ErrorCode::unobservable_system, os.str());
  }
  d.t_pcf_from_kin = solve(o_pcf, o_kin);
  d.gain_kin = d.t_kin_from_pcf * d.gain_pcf;
  d.g_obs = d.proc.g - outer(d.gain_kin, d.proc.c_prd);
  return d;
}

template <class T>
Vector to_real(const std::vector<T>& v) {
  return cast_vector<T, real>(v);
}

Polynomial as_poly(const QVector& v) { return Polynomial{to_real(v)}; }

struct QuadOcf {
  QMatrix t_kin_from_ocf, t_ocf_from_kin, g_ocf;
  QVector h_ocf;
};

QuadOcf quad_ocf(const QuadDesign& d, const ModelSpec& spec) {
  const std::size_t n = d.a_obs.size() - 1;
  QuadOcf o;
  o.g_ocf = companion_matrix(companion_column(d.a_obs));
  const QMatrix obs_kin = observability_matrix(d.proc.c_obs, d.g_obs);
  const QMatrix obs_ocf = observability_matrix(last_state_selector<quad>(n), o.g_ocf);
  try {
    o.t_kin_from_ocf = solve(obs_kin, obs_ocf);
  } catch (const SingularMatrixError& e) {
    std::ostringstream os;
    os << "output observability matrix is singular (column " << e.column << ", pivot ratio "
       << e.pivot_ratio << ") for " << describe(spec);
    throw Error(ErrorCode::unobservable_output, os.str());
  }
  o.t_ocf_from_kin = solve(obs_ocf, obs_kin);
  o.h_ocf = o.t_ocf_from_kin * d.gain_kin;
  return o;
}

TransferFunction tf_from_ocf(const QuadOcf& o, const QVector& a_obs) {
  TransferFunction tf;
  const std::size_t n = o.h_ocf.size();
  tf.b.assign(n + 1, 0.0L);
  for (std::size_t k = 0; k < n; ++k) tf.b[k] = static_cast<real>(o.h_ocf[n - 1 - k]);
  tf.a = to_real(a_obs);
  return tf;
}

}  // namespace

Polynomial poly_from_unit_roots(const ModelSpec& spec) {
  spec.validate();
  return as_poly(process_poly_q(spec));
}

Polynomial observer_poly(real pole, std::size_t order) {
  if (!(pole < 1.0L)) throw Error(ErrorCode::unstable_request, "pole must be < 1");
  if (!(pole >= 0.0L)) throw Error(ErrorCode::invalid_spec, "pole must be >= 0");
  return as_poly(repeated_root_polynomial(quad(pole), order));
}

ObserverRealization place_poles(const ModelSpec& spec) {
  const QuadDesign d = quad_design(spec);
  ObserverRealization r;
  r.spec = spec;
  r.g_prc = d.proc.g.cast<real>();
  r.c_prd = to_real(d.proc.c_prd);
  r.g_obs_kin = d.g_obs.cast<real>();
  r.gain_kin = to_real(d.gain_kin);
  r.c_obs_kin = to_real(d.proc.c_obs);
  r.t_kin_from_pcf = d.t_kin_from_pcf.cast<real>();
  r.t_pcf_from_kin = d.t_pcf_from_kin.cast<real>();
  r.process_poly = as_poly(d.a_prc);
  r.observer_poly = as_poly(d.a_obs);
  r.gain_pcf = to_real(d.gain_pcf);
  return r;
}

ObserverCanonicalForm observer_canonical_form(const ObserverRealization& obs) {
  const QuadDesign d = quad_design(obs.spec);
  const QuadOcf o = quad_ocf(d, obs.spec);
  return {o.t_kin_from_ocf.cast<real>(), o.t_ocf_from_kin.cast<real>(), o.g_ocf.cast<real>(),
          to_real(o.h_ocf)};
}

TransferFunction extract_transfer_function(const ObserverRealization& obs) {
  const QuadDesign d = quad_design(obs.spec);
  return tf_from_ocf(quad_ocf(d, obs.spec), d.a_obs);
}

AlphaBetaGains kalata_gains(real tracking_index) {
  const real lam = tracking_index;
  if (!(lam >= 0.0L) || !std::isfinite(lam))
    throw Error(ErrorCode::invalid_spec, "tracking index must be finite and >= 0");
  const real r = (4.0L + lam - std::sqrt(8.0L * lam + lam * lam)) / 4.0L;
  AlphaBetaGains g;
  g.alpha = 1.0L - r * r;
  g.beta = 2.0L * (2.0L - g.alpha) - 4.0L * std::sqrt(1.0L - g.alpha);
  return g;
}

TransferFunction alpha_beta_tf(real alpha, real beta, int q) {
  const real qr = static_cast<real>(q);
  return {{alpha - beta * qr, beta * (1.0L + qr) - alpha, 0.0L},
          {1.0L, alpha + beta - 2.0L, 1.0L - alpha}};
}

StateSpaceFilter alpha_beta_state_space(real alpha, real beta, int q, real ts) {
  if (!(ts > 0.0L)) throw Error(ErrorCode::invalid_spec, "ts must be positive");
  const Matrix<real> g{{1.0L, ts}, {0.0L, 1.0L}};
  const Vector c_prd{1.0L, ts};
  const Vector gain{alpha, beta / ts};
  return {g - outer(gain, c_prd), gain, {1.0L, -static_cast<real>(q) * ts}};
}

FilterDesign design_filter(const ModelSpec& spec, std::string name) {
  FilterDesign f;
  f.name = std::move(name);
  f.kind = FilterDesign::Kind::pole_placement;
  f.spec = spec;
  const QuadDesign d = quad_design(spec);
  f.tf = tf_from_ocf(quad_ocf(d, spec), d.a_obs);
  f.realization = {d.g_obs.cast<real>(), to_real(d.gain_kin), to_real(d.proc.c_obs)};
  return f;
}

FilterDesign design_alpha_beta(AlphaBetaGains gains, int q, real ts, real omega,
                               std::string name) {
  if (!(gains.alpha > 0.0L && gains.alpha < 2.0L && gains.beta > 0.0L))
    throw Error(ErrorCode::invalid_spec, "alpha-beta gains outside the stable region");
  FilterDesign f;
  f.name = std::move(name);
  f.kind = FilterDesign::Kind::alpha_beta;
  f.spec.k_tgt = 2;
  f.spec.k_man = 0;
  f.spec.k_int = 0;
  f.spec.ts = ts;
  f.spec.omega = omega;
  f.spec.lag_q = q;
  f.spec.pole = std::sqrt(std::abs(1.0L - gains.alpha));
  f.alpha_beta = gains;
  f.tf = alpha_beta_tf(gains.alpha, gains.beta, q);
  f.realization = alpha_beta_state_space(gains.alpha, gains.beta, q, ts);
  return f;
}

}  // namespace augtrack
