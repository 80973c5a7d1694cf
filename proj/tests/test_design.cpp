#include <gtest/gtest.h>

#include <cmath>

#include "augtrack/analysis.hpp"
#include "augtrack/design.hpp"
#include "augtrack/error.hpp"
#include "augtrack/validation.hpp"
#include "oracles.hpp"

using namespace augtrack;

namespace {

const ModelSpec kSpecB{2, 0, 1, 0.04L, 2.5L, 0.8L, 2, 0};
const ModelSpec kSpecC{2, 1, 1, 0.04L, 2.5L, 0.8L, 2, 0};

void expect_vec(const Vector& got, std::initializer_list<double> want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  std::size_t i = 0;
  for (double w : want) {
    EXPECT_NEAR(static_cast<double>(got[i]), w, tol) << "index " << i;
    ++i;
  }
}

void expect_mat(const Matrix<real>& got, std::initializer_list<std::initializer_list<double>> want,
                double tol) {
  ASSERT_EQ(got.rows(), want.size());
  std::size_t i = 0;
  for (const auto& row : want) {
    std::size_t j = 0;
    for (double w : row) {
      EXPECT_NEAR(static_cast<double>(got(i, j)), w, tol) << "(" << i << "," << j << ")";
      ++j;
    }
    ++i;
  }
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::invalid_spec;
}

}  // namespace

TEST(ProcessPoly, Examples) {
  expect_vec(poly_from_unit_roots(kSpecB).coeffs, {1, -1, -1, 1}, 0);
  expect_vec(poly_from_unit_roots(ModelSpec{1, 0, 0, 0.04L, 0, 0.5L, 0, 0}).coeffs, {1, -1}, 0);
}

TEST(ProcessPoly, MatchesRootProductOracle) {
  for (int kt = 1; kt <= 3; ++kt)
    for (int km = 0; km <= 1; ++km)
      for (int ki = 0; ki <= 2; ++ki) {
        ModelSpec s{kt, km, ki, 0.04L, 2.5L, 0.5L, 0, 0};
        const auto want = oracle::poly_from_roots(oracle::process_roots(s));
        const auto got = poly_from_unit_roots(s).coeffs;
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(double(got[k]), double(want[k]), 1e-14);
      }
  const real c = std::cos(0.1L);
  expect_vec(poly_from_unit_roots(kSpecC).coeffs,
             {1, double(-1 - 2 * c), double(2 * c), double(2 * c), double(-1 - 2 * c), 1},
             1e-15);
}

TEST(ObserverPoly, Examples) {
  expect_vec(observer_poly(0.8L, 3).coeffs, {1, -2.4, 1.92, -0.512}, 1e-15);
  expect_vec(observer_poly(0.8L, 5).coeffs, {1, -4, 6.4, -5.12, 2.048, -0.32768}, 1e-15);
  expect_vec(observer_poly(0.0L, 4).coeffs, {1, 0, 0, 0, 0}, 0);
  EXPECT_EQ(code_of([] { observer_poly(1.0L, 3); }), ErrorCode::unstable_request);
}

TEST(ObserverPoly, MatchesBinomialOracle) {
  for (int k = 1; k <= 9; ++k)
    for (real p : {0.0L, 0.3L, 0.8L, 0.95L}) {
      const auto got = observer_poly(p, static_cast<std::size_t>(k)).coeffs;
      const auto want = oracle::binomial_poly(p, k);
      for (std::size_t i = 0; i < got.size(); ++i)
        EXPECT_NEAR(double(got[i]), double(want[i]), 1e-13 * (1 + std::abs(double(want[i]))));
    }
}

TEST(Observability, Examples) {
  const auto sys = augment_process(kSpecB);
  expect_mat(observability_matrix(sys.c_prd, sys.g), {{1, 0.04, -1}, {1, 0.08, 1}, {1, 0.12, -1}},
             1e-15);
  const auto pcf = companion_matrix(companion_column(Vector{1, -1, -1, 1}));
  expect_mat(observability_matrix(Vector{0, 0, 1}, pcf), {{0, 0, 1}, {0, 1, 1}, {1, 1, 2}}, 0);
  expect_mat(observability_matrix(Vector{1}, Matrix<real>{{1}}), {{1}}, 0);
}

TEST(CompanionHelpers, WorkedExampleVectors) {
  // a_prc = z^3 - z^2 - z + 1 and a_obs = (z - 0.8)^3 map to the PCF columns
  // whose difference is the PCF gain.
  const auto g_prc = companion_column(Vector{1, -1, -1, 1});
  const auto g_obs = companion_column(observer_poly(0.8L, 3).coeffs);
  expect_vec(g_prc, {-1, 1, 1}, 0);
  expect_vec(g_obs, {0.512, -1.92, 2.4}, 1e-15);
  expect_vec(polynomial_from_companion_column(g_obs), {1, -2.4, 1.92, -0.512}, 1e-15);
  const auto r = place_poles(kSpecB);
  expect_vec(r.gain_pcf, {-1.512, 2.92, -1.4}, 1e-15);
}

TEST(PlacePoles, WorkedExample) {
  const auto r = place_poles(kSpecB);
  expect_vec(r.gain_kin, {0.054, 0.1, 1.458}, 1e-15);
  expect_mat(r.g_obs_kin,
             {{0.946, 0.03784, 0.054}, {-0.1, 0.996, 0.1}, {-1.458, -0.05832, 0.458}}, 1e-15);
  // Printed to four decimals.
  expect_mat(r.g_obs_kin,
             {{0.9460, 0.0378, 0.0540}, {-0.1000, 0.9960, 0.1000}, {-1.4580, -0.0583, 0.4580}},
             5e-5);
  expect_vec(r.c_obs_kin, {1, -0.08, 0}, 1e-15);
}

TEST(PlacePoles, ScalarDeadbeat) {
  const auto r = place_poles(ModelSpec{1, 0, 0, 0.04L, 0, 0.0L, 0, 0});
  expect_vec(r.gain_pcf, {1}, 0);
  expect_vec(r.c_prd, {1}, 0);
  expect_mat(r.g_obs_kin, {{0}}, 0);
}

TEST(PlacePoles, RealizationInvariants) {
  for (int kt = 1; kt <= 3; ++kt)
    for (int km = 0; km <= 1; ++km)
      for (int ki = 0; ki <= 2; ++ki)
        for (real p : {0.0L, 0.5L, 0.8L}) {
          ModelSpec s{kt, km, ki, 0.04L, 2.5L, p, 1, 0};
          const auto r = place_poles(s);
          const auto rebuilt = r.g_prc - outer(r.gain_kin, r.c_prd);
          EXPECT_LE(double(max_abs_diff(rebuilt, r.g_obs_kin)), 1e-12);
          const auto cp = oracle::charpoly(r.g_obs_kin);
          const auto want = observer_poly(p, s.order()).coeffs;
          for (std::size_t k = 0; k < cp.size(); ++k) EXPECT_NEAR(double(cp[k]), double(want[k]), 1e-9);
          if (s.order() <= 3 && p > 0) {
            // A K-fold root moves by about eps^(1/K); the cluster mean does not.
            const auto evs = oracle::eigenvalues(r.g_obs_kin);
            std::complex<double> mean = 0;
            for (const auto& ev : evs) {
              mean += ev;
              EXPECT_LT(std::abs(ev - std::complex<double>(double(p), 0)), s.order() < 3 ? 1e-6 : 1e-5)
                  << kt << km << ki << " p=" << double(p);
            }
            mean /= double(evs.size());
            EXPECT_LT(std::abs(mean - std::complex<double>(double(p), 0)), 1e-12);
          }
        }
}

TEST(PlacePoles, UnobservableWhenManeuverAliasesInterference) {
  // Omega * ts = pi puts the oscillator poles on top of the Nyquist pole.
  ModelSpec s{2, 1, 1, 0.04L, kPi / 0.04L, 0.5L, 0, 0};
  EXPECT_EQ(code_of([&] { place_poles(s); }), ErrorCode::unobservable_system);
}

TEST(ExtractTf, WorkedExample) {
  const auto tf = extract_transfer_function(place_poles(kSpecB));
  expect_vec(tf.b, {0.046, 0.004, -0.042, 0}, 1e-15);
  expect_vec(tf.a, {1, -2.4, 1.92, -0.512}, 1e-15);
  EXPECT_EQ(tf.b.back(), 0.0L);
}

TEST(ExtractTf, FilterC) {
  const auto tf = extract_transfer_function(place_poles(kSpecC));
  expect_vec(tf.b, {0.0899, -0.1532, -0.0232, 0.1534, -0.0666, 0}, 5e-5);
  expect_vec(tf.a, {1, -4, 6.4, -5.12, 2.048, -0.3277}, 5e-5);
  // From tests/oracles/interpolation_design.py.
  expect_vec(tf.b, {0.0899479235, -0.1532417331, -0.0232141139, 0.1534017331, -0.0665738096, 0},
             5e-11);
}

TEST(ExtractTf, OcfIntermediatesWorkedExample) {
  const auto ocf = observer_canonical_form(place_poles(kSpecB));
  expect_vec(ocf.h_ocf, {-0.042, 0.004, 0.046}, 1e-15);
  expect_mat(ocf.t_ocf_from_kin,
             {{0.47, -0.06144, -0.042}, {-1.446, 0.15016, 0.046}, {1, -0.08, 0}}, 1e-15);
}

TEST(ExtractTf, TransformConsistency) {
  for (const auto& s : {kSpecB, kSpecC, ModelSpec{3, 1, 2, 0.04L, 2.5L, 0.6L, -1, 0},
                        ModelSpec{3, 0, 1, 0.04L, 0, 0.7L, 3, 1}}) {
    const auto r = place_poles(s);
    const auto ocf = observer_canonical_form(r);
    const auto g = ocf.t_ocf_from_kin * r.g_obs_kin * ocf.t_kin_from_ocf;
    EXPECT_LE(double(max_abs_diff(g, ocf.g_ocf)), 1e-9);
    const auto expected = companion_matrix(companion_column(observer_poly(s.pole, s.order()).coeffs));
    EXPECT_LE(double(max_abs_diff(ocf.g_ocf, expected)), 1e-15);
    const auto h = ocf.t_ocf_from_kin * r.gain_kin;
    for (std::size_t k = 0; k < h.size(); ++k) EXPECT_NEAR(double(h[k]), double(ocf.h_ocf[k]), 1e-12);
  }
}

TEST(ExtractTf, MatchesMarkovParameterOracle) {
  for (const auto& s : {kSpecB, kSpecC, ModelSpec{3, 1, 2, 0.04L, 2.5L, 0.6L, -1, 0},
                        ModelSpec{1, 0, 0, 0.04L, 0, 0.3L, 2, 0},
                        ModelSpec{3, 0, 1, 0.04L, 0, 0.7L, 3, 1}}) {
    const auto r = place_poles(s);
    const auto tf = extract_transfer_function(r);
    const auto h = oracle::markov(r.state_space(), s.order() + 1);
    const auto b = oracle::numerator_from_markov(tf.a, h);
    for (std::size_t k = 0; k < b.size(); ++k)
      EXPECT_NEAR(double(tf.b[k]), double(b[k]), 1e-11 * (1 + std::abs(double(b[k]))));
  }
}

TEST(ExtractTf, ResolventAgreesWithRatio) {
  for (const auto& s : {kSpecB, kSpecC}) {
    const auto r = place_poles(s);
    const auto tf = extract_transfer_function(r);
    for (double w : {0.1, 1.0, 2.5}) {
      const auto hs = oracle::resolvent_response(r.state_space(), w);
      const auto ht = oracle::ratio_response(tf, w);
      EXPECT_LE(std::abs(hs - ht), 1e-9 * std::abs(ht));
    }
  }
}

TEST(ExtractTf, DcGainIsUnity) {
  for (int kt = 1; kt <= 3; ++kt)
    for (int km = 0; km <= 1; ++km)
      for (int ki = 0; ki <= 2; ++ki) {
        ModelSpec s{kt, km, ki, 0.04L, 2.5L, 0.75L, 2, 0};
        const auto tf = extract_transfer_function(place_poles(s));
        real sb = 0, sa = 0;
        for (auto v : tf.b) sb += v;
        for (auto v : tf.a) sa += v;
        EXPECT_NEAR(double(sb / sa), 1.0, 1e-9);
      }
}

TEST(ExtractTf, DeadbeatIsFir) {
  for (const auto& base : {kSpecB, kSpecC, ModelSpec{3, 1, 2, 0.04L, 2.5L, 0, -2, 0}}) {
    ModelSpec s = base;
    s.pole = 0;
    const auto r = place_poles(s);
    const auto tf = extract_transfer_function(r);
    for (std::size_t k = 1; k < tf.a.size(); ++k) EXPECT_EQ(tf.a[k], 0.0L);
    const auto h = oracle::markov(r.state_space(), 3 * s.order());
    long double peak = 0;
    for (auto v : h) peak = std::max(peak, std::abs(v));
    // Powers of a rounded nilpotent matrix leave a small residue.
    for (std::size_t n = s.order(); n < h.size(); ++n) EXPECT_LE(std::abs(h[n]), 1e-10L * peak);
    const auto ht = impulse_response(tf);
    for (std::size_t n = s.order(); n < ht.size(); ++n) EXPECT_EQ(ht[n], 0.0L);
  }
}

TEST(AlphaBeta, TfExamples) {
  const auto tf = alpha_beta_tf(0.36L, 0.08L, 2);
  expect_vec(tf.b, {0.2, -0.12, 0}, 1e-15);
  expect_vec(tf.a, {1, -1.56, 0.64}, 1e-15);
  const auto tf0 = alpha_beta_tf(0.5L, 0.2L, 0);
  expect_vec(tf0.b, {0.5, -0.3, 0}, 1e-15);
}

TEST(AlphaBeta, PoleRadius) {
  const auto tf = alpha_beta_tf(0.36L, 0.08L, 2);
  const std::complex<long double> disc = tf.a[1] * tf.a[1] - 4 * tf.a[2];
  const auto root = std::sqrt(disc);
  EXPECT_NEAR(double(std::abs((-tf.a[1] + root) / 2.0L)), 0.8, 1e-12);
  EXPECT_NEAR(double(std::abs((-tf.a[1] - root) / 2.0L)), 0.8, 1e-12);
}

TEST(AlphaBeta, StateSpaceMatchesTf) {
  for (int q : {-1, 0, 2}) {
    const auto ss = alpha_beta_state_space(0.36L, 0.08L, q, 0.04L);
    const auto tf = alpha_beta_tf(0.36L, 0.08L, q);
    const auto h = oracle::markov(ss, 3);
    const auto b = oracle::numerator_from_markov(tf.a, h);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(double(b[k]), double(tf.b[k]), 1e-15);
  }
}

TEST(Kalata, Examples) {
  const auto g = kalata_gains(0.1L);
  EXPECT_NEAR(double(g.alpha), 0.36, 1e-9);
  EXPECT_NEAR(double(g.beta), 0.08, 1e-9);
  const auto g1 = kalata_gains(1.0L);
  EXPECT_NEAR(double(g1.alpha), 0.75, 1e-12);
  EXPECT_NEAR(double(g1.beta), 0.5, 1e-12);
  const auto g0 = kalata_gains(1e-12L);
  EXPECT_LT(double(g0.alpha), 1e-5);
  EXPECT_LT(double(g0.beta), 1e-10);
  EXPECT_EQ(code_of([] { kalata_gains(-1.0L); }), ErrorCode::invalid_spec);
}

TEST(Kalata, IdentitiesHold) {
  for (real lam : {0.01L, 0.1L, 0.5L, 1.0L, 3.0L, 10.0L}) {
    const auto g = kalata_gains(lam);
    EXPECT_NEAR(double(g.beta), double(2 * (2 - g.alpha) - 4 * std::sqrt(1 - g.alpha)), 1e-12);
    EXPECT_NEAR(double(lam * lam), double(g.beta * g.beta / (1 - g.alpha)), 1e-12 * (1 + double(lam * lam)));
  }
}

TEST(Kalata, MatchesRiccatiOracle) {
  for (double sq : {62.5, 625.0}) {
    const double ts = 0.04;
    const auto [kp, kv] = oracle::riccati_gain(sq, 1.0, ts);
    const auto g = kalata_gains(static_cast<real>(ts * ts * sq));
    EXPECT_NEAR(kp, double(g.alpha), 1e-9);
    EXPECT_NEAR(kv * ts, double(g.beta), 1e-9);
  }
}

TEST(DesignFilter, RejectsOutOfRegionAlphaBeta) {
  EXPECT_EQ(code_of([] { design_alpha_beta({2.5L, 0.1L}, 0, 0.04L, 0); }), ErrorCode::invalid_spec);
  EXPECT_EQ(code_of([] { design_alpha_beta({0.5L, -0.1L}, 0, 0.04L, 0); }), ErrorCode::invalid_spec);
}

TEST(DesignFilter, ReferenceSet) {
  const auto fs = reference_filters();
  ASSERT_EQ(fs.size(), 5u);
  EXPECT_EQ(fs[0].name, "A");
  EXPECT_EQ(fs[1].name, "B");
  EXPECT_EQ(fs[2].name, "C");
  EXPECT_EQ(fs[0].kind, FilterDesign::Kind::alpha_beta);
  EXPECT_NEAR(double(fs[0].spec.pole), 0.8, 1e-12);
  for (const auto& f : fs) EXPECT_EQ(f.tf.order(), f.realization.order());
}
