#include "augtrack/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "augtrack/error.hpp"

namespace augtrack {
namespace {

real factorial(int n) {
  real f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= static_cast<real>(i);
  return f;
}

std::string describe(const ModelSpec& s) {
  std::ostringstream os;
  os << "{k_tgt=" << s.k_tgt << ", k_man=" << s.k_man << ", k_int=" << s.k_int
     << ", ts=" << static_cast<double>(s.ts) << ", omega=" << static_cast<double>(s.omega)
     << ", pole=" << static_cast<double>(s.pole) << ", q=" << s.lag_q << ", d=" << s.deriv_d
     << "}";
  return os.str();
}

}  // namespace

void ModelSpec::validate() const {
  if (k_tgt <= 0 && k_man <= 0 && k_int <= 0)
    throw Error(ErrorCode::empty_model, "total order K is zero " + describe(*this));
  if (k_tgt < 1) throw Error(ErrorCode::invalid_order, "k_tgt must be >= 1 " + describe(*this));
  if (k_man < 0 || k_man > 1)
    throw Error(ErrorCode::invalid_spec, "k_man must be 0 or 1 " + describe(*this));
  if (k_int < 0) throw Error(ErrorCode::invalid_order, "k_int must be >= 0 " + describe(*this));
  if (!(ts > 0.0L) || !std::isfinite(ts))
    throw Error(ErrorCode::invalid_spec, "ts must be positive and finite " + describe(*this));
  if (k_man == 1 && !(omega > 1e-9L / ts && std::isfinite(omega)))
    throw Error(ErrorCode::invalid_rate,
                "omega must exceed 1e-9/ts when a maneuver model is present " + describe(*this));
  if (!(pole >= 0.0L)) throw Error(ErrorCode::invalid_spec, "pole must be >= 0 " + describe(*this));
  if (!(pole < 1.0L))
    throw Error(ErrorCode::unstable_request, "pole must be < 1 " + describe(*this));
  if (deriv_d < 0) throw Error(ErrorCode::invalid_spec, "d must be >= 0 " + describe(*this));
  if (deriv_d >= k_tgt)
    throw Error(ErrorCode::derivative_too_high, "d must be < k_tgt " + describe(*this));
}

Matrix<real> integrator_transition(int k, real dt) {
  if (k < 1) throw Error(ErrorCode::invalid_order, "integrator order must be >= 1");
  const auto n = static_cast<std::size_t>(k);
  Matrix<real> g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const real term = std::pow(dt, static_cast<real>(j)) / factorial(static_cast<int>(j));
    for (std::size_t i = 0; i + j < n; ++i) g(i, i + j) = term;
  }
  return g;
}

Matrix<real> oscillator_transition(real omega, real dt) {
  if (!(omega > 0.0L)) throw Error(ErrorCode::invalid_rate, "omega must be > 0");
  const real c = std::cos(omega * dt);
  const real s = std::sin(omega * dt);
  return Matrix<real>{{c, s / omega}, {-omega * s, c}};
}

Matrix<real> build_target_discrete(int k_tgt, real ts) {
  if (k_tgt < 1) throw Error(ErrorCode::invalid_order, "k_tgt must be >= 1");
  return integrator_transition(k_tgt, ts);
}

Matrix<real> build_maneuver_discrete(real omega, real ts) {
  return oscillator_transition(omega, ts);
}

Matrix<real> build_interference_discrete(int k_int, real ts) {
  if (k_int < 1) throw Error(ErrorCode::invalid_order, "k_int must be >= 1");
  return -integrator_transition(k_int, ts);
}

DiscreteSystem augment_process(const ModelSpec& spec) {
  spec.validate();
  DiscreteSystem sys;
  sys.dims.target = static_cast<std::size_t>(spec.k_tgt);
  sys.dims.maneuver = static_cast<std::size_t>(2 * spec.k_man);
  sys.dims.interference = static_cast<std::size_t>(spec.k_int);
  const std::size_t k_order = sys.dims.total();

  sys.g = Matrix<real>(k_order, k_order);
  sys.c_prc.assign(k_order, 0.0L);

  sys.g.set_block(0, 0, build_target_discrete(spec.k_tgt, spec.ts));
  sys.c_prc[0] = 1.0L;
  if (spec.k_man == 1) {
    sys.g.set_block(sys.dims.maneuver_offset(), sys.dims.maneuver_offset(),
                    build_maneuver_discrete(spec.omega, spec.ts));
    sys.c_prc[sys.dims.maneuver_offset()] = 1.0L;
  }
  if (spec.k_int > 0) {
    sys.g.set_block(sys.dims.interference_offset(), sys.dims.interference_offset(),
                    build_interference_discrete(spec.k_int, spec.ts));
    sys.c_prc[sys.dims.interference_offset()] = 1.0L;
  }
  sys.c_prd = sys.c_prc * sys.g;
  return sys;
}

Matrix<real> signal_shift_matrix(SignalBlock block, int q, const ModelSpec& spec) {
  const real dt = -static_cast<real>(q) * spec.ts;
  switch (block) {
    case SignalBlock::target:
      return integrator_transition(spec.k_tgt, dt);
    case SignalBlock::maneuver:
      if (spec.k_man != 1)
        throw Error(ErrorCode::invalid_spec, "spec has no maneuver block");
      return q == 0 ? Matrix<real>::identity(2) : oscillator_transition(spec.omega, dt);
  }
  throw Error(ErrorCode::invalid_spec, "unknown signal block");
}

Matrix<real> target_state_matrix(int k_tgt) {
  const auto n = static_cast<std::size_t>(k_tgt);
  Matrix<real> a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0L;
  return a;
}

Matrix<real> maneuver_state_matrix(real omega) {
  return Matrix<real>{{0.0L, 1.0L}, {-omega * omega, 0.0L}};
}

OutputRow output_row(const ModelSpec& spec) {
  spec.validate();
  const auto d = static_cast<unsigned>(spec.deriv_d);
  const std::size_t k_order = spec.order();
  OutputRow out;
  out.lag_q = spec.lag_q;
  out.deriv_d = spec.deriv_d;
  out.c_obs.assign(k_order, 0.0L);

  Vector c_tgt(static_cast<std::size_t>(spec.k_tgt), 0.0L);
  c_tgt[0] = 1.0L;
  const Vector tgt = c_tgt * signal_shift_matrix(SignalBlock::target, spec.lag_q, spec) *
                     power(target_state_matrix(spec.k_tgt), d);
  std::copy(tgt.begin(), tgt.end(), out.c_obs.begin());

  if (spec.k_man == 1) {
    const Vector man = Vector{1.0L, 0.0L} *
                       signal_shift_matrix(SignalBlock::maneuver, spec.lag_q, spec) *
                       power(maneuver_state_matrix(spec.omega), d);
    std::copy(man.begin(), man.end(),
              out.c_obs.begin() + static_cast<std::ptrdiff_t>(spec.k_tgt));
  }
  return out;
}

}  // namespace augtrack
