#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "augtrack/matrix.hpp"
#include "augtrack/types.hpp"

namespace augtrack {

/// Monic polynomial in descending powers: coeffs[0] z^K + ... + coeffs[K].
struct Polynomial {
  Vector coeffs{1.0L};

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  bool operator==(const Polynomial&) const = default;
};

template <class T>
std::vector<T> convolve(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<T> out(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Conversions between a monic polynomial z^K + a1 z^{K-1} + ... + aK and
// the last column g of its companion matrix, using
//   z^K - sum_k g(k) z^k = z^K + sum_k a(k) z^{K-k},
// i.e. g(k) = -a(K - k) for 0 <= k < K.
template <class T>
std::vector<T> companion_column(const std::vector<T>& monic) {
  if (monic.empty()) throw std::invalid_argument("companion_column: empty polynomial");
  const std::size_t k_order = monic.size() - 1;
  std::vector<T> g(k_order);
  for (std::size_t k = 0; k < k_order; ++k) g[k] = -monic[k_order - k];
  return g;
}

template <class T>
std::vector<T> polynomial_from_companion_column(const std::vector<T>& g) {
  const std::size_t k_order = g.size();
  std::vector<T> a(k_order + 1);
  a[0] = T(1);
  for (std::size_t k = 1; k <= k_order; ++k) a[k] = -g[k_order - k];
  return a;
}

// Companion matrix with ones on the first subdiagonal and `g` in the last
// column. This is the shared structure of the process and observer
// canonical forms.
template <class T>
Matrix<T> companion_matrix(const std::vector<T>& g) {
  const std::size_t n = g.size();
  Matrix<T> m(n, n);
  for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = T(1);
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = g[i];
  return m;
}

// The row selecting the last state, [0 ... 0 1].
template <class T>
std::vector<T> last_state_selector(std::size_t n) {
  std::vector<T> c(n, T(0));
  if (n) c.back() = T(1);
  return c;
}

/// (z - p)^K by binomial expansion.
template <class T>
std::vector<T> repeated_root_polynomial(const T& root, std::size_t order) {
  std::vector<T> a{T(1)};
  for (std::size_t k = 0; k < order; ++k) a = convolve(a, std::vector<T>{T(1), T(-root)});
  return a;
}

/// Evaluates sum_k c[k] x^k (ascending powers) by Horner's rule.
template <class T, class X>
X horner_ascending(const std::vector<T>& c, const X& x) {
  X acc(0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + X(c[k]);
  return acc;
}

}  // namespace augtrack
