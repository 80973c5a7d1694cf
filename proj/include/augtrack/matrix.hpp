#pragma once

// Small dense row-major matrices and Gauss-Jordan inversion.
//
// The state dimension of every model here is tiny (K <= ~9), so the
// matrix type is a plain value type over std::vector with no expression
// templates. It is templated on the scalar so the pole-placement code can
// run the same algorithms in extended precision.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace augtrack {

struct SingularMatrixError : std::runtime_error {
  SingularMatrixError(std::size_t column, double pivot_ratio)
      : std::runtime_error("matrix is numerically singular"),
        column(column),
        pivot_ratio(pivot_ratio) {}
  std::size_t column;
  double pivot_ratio;
};

template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init)
      : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Copies `block` with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
    for (std::size_t i = 0; i < block.rows(); ++i)
      for (std::size_t j = 0; j < block.cols(); ++j) (*this)(r0 + i, c0 + j) = block(i, j);
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = static_cast<U>((*this)(i, j));
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix sum: dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Row vector times matrix.
template <class T>
std::vector<T> operator*(const std::vector<T>& row, const Matrix<T>& m) {
  if (row.size() != m.rows()) throw std::invalid_argument("row*matrix: dimension mismatch");
  std::vector<T> out(m.cols(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += row[i] * m(i, j);
  return out;
}

// Matrix times column vector.
template <class T>
std::vector<T> operator*(const Matrix<T>& m, const std::vector<T>& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("matrix*vector: dimension mismatch");
  std::vector<T> out(m.rows(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
Matrix<T> outer(const std::vector<T>& col, const std::vector<T>& row) {
  Matrix<T> m(col.size(), row.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = col[i] * row[j];
  return m;
}

template <class T>
Matrix<T> power(const Matrix<T>& m, unsigned n) {
  Matrix<T> result = Matrix<T>::identity(m.rows());
  for (unsigned k = 0; k < n; ++k) result = result * m;
  return result;
}

template <class T, class U>
std::vector<U> cast_vector(const std::vector<T>& v) {
  std::vector<U> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<U>(v[i]);
  return out;
}

// Relative pivot threshold for Gauss-Jordan: a pivot smaller than
// `tolerance * max initial row norm` marks the matrix singular.
template <class T>
struct PivotTolerance {
  static T value() { return T(1e-10); }
};

// Solves A X = B by Gauss-Jordan elimination with partial pivoting.
template <class T>
Matrix<T> solve(Matrix<T> a, Matrix<T> b, T tolerance = PivotTolerance<T>::value()) {
  using std::abs;
  using std::sqrt;
  if (!a.square() || a.rows() != b.rows())
    throw std::invalid_argument("solve: dimension mismatch");
  const std::size_t n = a.rows();

  T scale(0);
  for (std::size_t i = 0; i < n; ++i) {
    T s(0);
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * a(i, j);
    scale = std::max(scale, T(sqrt(s)));
  }
  if (scale == T(0)) throw SingularMatrixError(0, 0.0);

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (abs(a(i, c)) > abs(a(p, c))) p = i;
    const T ratio = abs(a(p, c)) / scale;
    if (ratio < tolerance) throw SingularMatrixError(c, static_cast<double>(ratio));
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(p, j), b(c, j));
    }
    const T inv = T(1) / a(c, c);
    for (std::size_t j = 0; j < n; ++j) a(c, j) *= inv;
    for (std::size_t j = 0; j < b.cols(); ++j) b(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const T f = a(i, c);
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(c, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(c, j);
    }
  }
  return b;
}

template <class T>
std::vector<T> solve(const Matrix<T>& a, const std::vector<T>& rhs,
                     T tolerance = PivotTolerance<T>::value()) {
  Matrix<T> b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  return solve(a, std::move(b), tolerance).col(0);
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a, T tolerance = PivotTolerance<T>::value()) {
  return solve(a, Matrix<T>::identity(a.rows()), tolerance);
}

template <class T>
T max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  using std::abs;
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  T m(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, T(abs(a(i, j) - b(i, j))));
  return m;
}

}  // namespace augtrack
