#ifndef AFV_MATRIX_HPP
#define AFV_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "afv/error.hpp"
#include "afv/rational.hpp"

namespace afv {

template <typename T>
using Vector = std::vector<T>;

/// Small dense row-major matrix. Sizes here are desk scale (n <= 64), so no
/// blocking or expression templates.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InputError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix diagonal(std::span<const T> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix diagonal(std::initializer_list<T> d) {
    return diagonal(std::span<const T>(d.begin(), d.size()));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector<T> col(std::size_t j) const {
    Vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::span<const T> data() const { return data_; }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw InputError("matrix-vector shape mismatch");
  Vector<T> y(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}
template <typename T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
  return a * std::span<const T>(x);
}

template <typename T>
T dot(std::span<const T> x, std::span<const T> y) {
  T s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

template <typename T>
Matrix<T> outer(std::span<const T> u, std::span<const T> v) {
  Matrix<T> m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

template <typename T>
T trace(const Matrix<T>& m) {
  T s(0);
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

/// M^<i>: the principal submatrix with row and column `i` removed.
template <typename T>
Matrix<T> remove_index(const Matrix<T>& m, std::size_t i) {
  if (!m.square() || i >= m.rows()) throw InputError("remove_index: index out of range");
  const std::size_t n = m.rows() - 1;
  Matrix<T> r(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) r(a, b) = m(a < i ? a : a + 1, b < i ? b : b + 1);
  return r;
}

inline double frobenius_norm(const Matrix<double>& m) {
  double s = 0;
  for (double x : m.data()) s += x * x;
  return std::sqrt(s);
}

inline double max_abs(const Matrix<double>& m) {
  double s = 0;
  for (double x : m.data()) s = std::max(s, std::abs(x));
  return s;
}

inline Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}
inline const Matrix<double>& to_double(const Matrix<double>& m) { return m; }

inline Vector<double> to_double(std::span<const Rational> v) {
  Vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return r;
}

/// Exact symmetry for rationals; |M - M^T| <= rel_tol * max|M| for doubles.
template <typename T>
bool is_symmetric(const Matrix<T>& m, double rel_tol = 1e-12) {
  if (!m.square()) return false;
  if constexpr (is_exact_v<T>) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = i + 1; j < m.cols(); ++j)
        if (m(i, j) != m(j, i)) return false;
    return true;
  } else {
    const double bound = rel_tol * max_abs(m);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = i + 1; j < m.cols(); ++j)
        if (std::abs(m(i, j) - m(j, i)) > bound) return false;
    return true;
  }
}

/// Determinant. Exact scalars use fraction-free (Bareiss) elimination;
/// floating point uses LU with partial pivoting.
template <typename T>
T determinant(Matrix<T> m) {
  if (!m.square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return T(1);
  if constexpr (std::is_same_v<T, Rational>) {
    // Clear denominators row by row, then run Bareiss over the integers.
    Matrix<Integer> z(n, n);
    Integer scale(1);
    for (std::size_t i = 0; i < n; ++i) {
      Integer l(1);
      for (std::size_t j = 0; j < n; ++j) l = boost::multiprecision::lcm(l, denominator(m(i, j)));
      for (std::size_t j = 0; j < n; ++j) z(i, j) = numerator(m(i, j)) * (l / denominator(m(i, j)));
      scale *= l;
    }
    return Rational(determinant(std::move(z))) / Rational(scale);
  } else if constexpr (is_exact_v<T>) {
    T sign(1), prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m(k, k) == 0) {
        std::size_t r = k + 1;
        while (r < n && m(r, k) == 0) ++r;
        if (r == n) return T(0);
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j)
          m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  } else {
    T det(1);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < n; ++r)
        if (std::abs(m(r, k)) > std::abs(m(piv, k))) piv = r;
      if (m(piv, k) == T(0)) return T(0);
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
        det = -det;
      }
      det *= m(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T f = m(i, k) / m(k, k);
        for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      }
    }
    return det;
  }
}

template <typename T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

/// Calls fn(indices) for every k-subset of {0,..,n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace afv

#endif  // AFV_MATRIX_HPP
