#pragma once

// 113-bit binary floating point used where long double runs out of digits:
// canonical-form transforms and frequency-response derivatives.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "augtrack/matrix.hpp"

namespace augtrack::detail {

using quad = boost::multiprecision::cpp_bin_float_quad;
using quad_complex = boost::multiprecision::cpp_complex_quad;

}  // namespace augtrack::detail

namespace augtrack {

// Well-posed observability matrices for pole radii near one have pivot
// ratios down to ~1e-12; exact pole-zero cancellations leave ~1e-33.
template <>
struct PivotTolerance<detail::quad> {
  static detail::quad value() { return detail::quad("1e-24"); }
};

}  // namespace augtrack
