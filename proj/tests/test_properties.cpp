#include <gtest/gtest.h>

#include "property_suite.hpp"

namespace {

const props::Outcome& outcome() {
  static const props::Outcome o = props::run();
  return o;
}

}  // namespace

TEST(Properties, CoverAllBranches) {
  const auto& o = outcome();
  EXPECT_EQ(o.cases, 200);
  EXPECT_EQ(o.unexplained_errors, 0);
  for (const auto& n : o.notes) ADD_FAILURE() << n;
  EXPECT_GT(o.designed, 150);
  EXPECT_GT(o.deadbeat_cases, 5);
  EXPECT_GT(o.nyquist_cases, 50);
  EXPECT_GT(o.maneuver_cases, 50);
}

TEST(Properties, DenominatorIsObserverPoly) { EXPECT_LE(outcome().worst.a_vs_observer_poly, 1e-9); }

TEST(Properties, DcFlatness) { EXPECT_EQ(outcome().worst.flatness_failures, 0); }

TEST(Properties, NyquistNull) { EXPECT_LE(outcome().worst.nyquist, 1e-9); }

TEST(Properties, ManeuverMatch) { EXPECT_LE(outcome().worst.maneuver, 1e-9); }

TEST(Properties, ParsevalAgreement) { EXPECT_LE(outcome().worst.parseval, 1e-6); }

TEST(Properties, TransferFunctionMatchesStateSpace) { EXPECT_LE(outcome().worst.tf_vs_ss, 1e-9); }

TEST(Properties, DeadbeatIsFir) { EXPECT_LE(outcome().worst.deadbeat_tail, 1e-12); }

TEST(Properties, StableDenominators) {
  for (const auto& s : props::random_specs(50, 99)) {
    try {
      const auto d = augtrack::design_filter(s);
      const auto h = augtrack::impulse_response(d.tf);
      EXPECT_LT(h.size(), 1'000'000u);
    } catch (const augtrack::Error& e) {
      EXPECT_EQ(e.code(), augtrack::ErrorCode::unobservable_output) << e.what();
    }
  }
}
