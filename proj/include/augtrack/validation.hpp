#pragma once

// Reference filter set and the golden-value suite run by `augtrack validate`.

#include <string>
#include <vector>

#include "augtrack/design.hpp"
#include "augtrack/types.hpp"

namespace augtrack {

/// Second-order target, Nyquist interference, q = 2, ts = 0.04, omega = 2.5.
ModelSpec reference_spec_b(real pole = 0.8L);

/// reference_spec_b with one maneuver oscillator pair added.
ModelSpec reference_spec_c(real pole = 0.8L);

/// Steady-state alpha-beta filter for tracking index 0.1, q = 2.
FilterDesign reference_filter_a();
FilterDesign reference_filter_b(real pole = 0.8L);
FilterDesign reference_filter_c();

/// A, B, C, B@0.7, B@0.9 in that order.
std::vector<FilterDesign> reference_filters();

struct GoldenCheck {
  std::string group;
  std::string item;
  std::string reference;  // as printed in the reference tables
  real computed = 0;
  real tolerance = 0;
  bool pass = false;
};

struct ValidationOptions {
  real perturb = 0;  // added to b[0] of the p = 0.8 reference filter B
};

std::vector<GoldenCheck> run_golden_suite(const ValidationOptions& opts = {});

/// Value of one unit in the last printed digit of a decimal string.
real last_digit_unit(const std::string& printed);

/// `value` rounded to the same number of digits as `printed`.
std::string format_like(const std::string& printed, real value);

}  // namespace augtrack
