#pragma once

#include <complex>
#include <vector>

namespace augtrack {

// Working precision of every stored coefficient, state and sample.
// Direct-form filters with K repeated poles near the unit circle have
// coefficient sums of order (1 - p)^K, so double storage is not enough
// to hold their dc/maneuver constraints at 1e-9.
using real = long double;
using complex = std::complex<real>;
using Vector = std::vector<real>;

inline constexpr real kPi = 3.141592653589793238462643383279502884L;

}  // namespace augtrack
