#ifndef AFV_MIXDISC_HPP
#define AFV_MIXDISC_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "afv/error.hpp"
#include "afv/matrix.hpp"
#include "afv/inequality.hpp"
#include "afv/rational.hpp"
#include "afv/spectral.hpp"

namespace afv {

template <typename T>
using SymMatrixList = std::vector<Matrix<T>>;

namespace detail {

template <typename T>
void check_symmetric_list(std::span<const Matrix<T>> mats, std::size_t dim, const char* what) {
  for (const auto& m : mats) {
    if (!m.square() || m.rows() != dim)
      throw InputError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                       std::to_string(dim) + " matrices");
    if (!is_symmetric(m, 1e-12)) throw InputError(std::string(what) + ": matrix is not symmetric");
  }
}

template <typename T>
T divide_by_factorial(const T& x, std::size_t n) {
  if constexpr (is_exact_v<T>)
    return x / factorial(static_cast<unsigned>(n));
  else
    return x / std::tgamma(static_cast<double>(n) + 1.0);
}

}  // namespace detail

/// D(M_1,...,M_m) by polarization:
///   (1/m!) sum_{S} (-1)^{m-|S|} det(sum_{i in S} M_i),
/// walking subsets in Gray-code order so each step adds or removes one matrix.
/// Exact on rational input.
template <typename T>
T mixed_discriminant(std::span<const Matrix<T>> mats) {
  const std::size_t m = mats.size();
  if (m == 0) throw InputError("mixed_discriminant: no matrices");
  if (m > 20) throw InputError("mixed_discriminant: more than 20 matrices");
  detail::check_symmetric_list(mats, m, "mixed_discriminant");
  Matrix<T> sum(m, m);
  T total(0);
  std::uint64_t prev = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << m); ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t changed = gray ^ prev;
    const auto j = static_cast<std::size_t>(std::countr_zero(changed));
    if (gray & changed)
      sum += mats[j];
    else
      sum -= mats[j];
    prev = gray;
    const T det = determinant(sum);
    if ((m - static_cast<std::size_t>(std::popcount(gray))) % 2 == 0)
      total += det;
    else
      total -= det;
  }
  return detail::divide_by_factorial(total, m);
}

template <typename T>
T mixed_discriminant(const std::vector<Matrix<T>>& mats) {
  return mixed_discriminant(std::span<const Matrix<T>>(mats));
}

template <typename T>
struct IdentityPair {
  T lhs;
  T rhs;
};

/// D(e_i e_i^T, M_2,...,M_m) against (1/m) D(M_2^<i>,...,M_m^<i>), where
/// m is the ambient matrix dimension and M^<i> drops row and column i.
template <typename T>
IdentityPair<T> md_minor_identity(std::size_t i, std::span<const Matrix<T>> mats) {
  const std::size_t m = mats.size() + 1;
  if (m < 2) throw InputError("md_minor_identity: need at least one matrix");
  detail::check_symmetric_list(mats, m, "md_minor_identity");
  if (i >= m) throw InputError("md_minor_identity: index out of range");
  std::vector<Matrix<T>> full;
  Matrix<T> ei(m, m);
  ei(i, i) = T(1);
  full.push_back(ei);
  full.insert(full.end(), mats.begin(), mats.end());
  std::vector<Matrix<T>> minors;
  for (const auto& mm : mats) minors.push_back(remove_index(mm, i));
  return {mixed_discriminant<T>(full), T(mixed_discriminant<T>(minors) / T(static_cast<int>(m)))};
}

/// Positive semidefinite up to eigenvalue >= -1e-10 ||M||.
template <typename T>
bool is_psd(const Matrix<T>& m, double rel_tol = 1e-10) {
  const Matrix<double> d = to_double(m);
  const Eigensystem es = eigh(d);
  const double scale = frobenius_norm(d);
  return es.values.back() >= -rel_tol * scale;
}

/// Positive definite: smallest eigenvalue > 1e-10 ||M||.
template <typename T>
bool is_pd(const Matrix<T>& m, double rel_tol = 1e-10) {
  const Matrix<double> d = to_double(m);
  const Eigensystem es = eigh(d);
  const double scale = frobenius_norm(d);
  return es.values.back() > rel_tol * scale;
}

/// D(A,B,M..)^2 >= D(A,A,M..) D(B,B,M..) for symmetric A and PSD B, M_k.
/// `ms` holds m-2 matrices, m the matrix dimension.
template <typename T>
InequalityReport verify_alexandrov(const Matrix<T>& a, const Matrix<T>& b,
                                   std::span<const Matrix<T>> ms, double tol = 1e-9) {
  const std::size_t m = a.rows();
  if (m < 2) throw InputError("verify_alexandrov: matrices must be at least 2x2");
  if (ms.size() + 2 != m)
    throw InputError("verify_alexandrov: need " + std::to_string(m - 2) +
                     " reference matrices for dimension " + std::to_string(m));
  const Matrix<T> ab[2] = {a, b};
  detail::check_symmetric_list(std::span<const Matrix<T>>(ab, 2), m, "verify_alexandrov");
  detail::check_symmetric_list(ms, m, "verify_alexandrov");
  if (!is_psd(b)) throw PreconditionError("verify_alexandrov: B is not positive semidefinite");
  for (const auto& mm : ms)
    if (!is_psd(mm))
      throw PreconditionError("verify_alexandrov: a reference matrix is not positive semidefinite");
  auto d = [&](const Matrix<T>& x, const Matrix<T>& y) {
    std::vector<Matrix<T>> v{x, y};
    v.insert(v.end(), ms.begin(), ms.end());
    return mixed_discriminant<T>(v);
  };
  const T dab = d(a, b);
  return make_inequality_report<T>(T(dab * dab), T(d(a, a) * d(b, b)), tol);
}

/// The operator on R^n attached to diagonal matrices:
///   (A y)_i = D(diag(y)^<i>, I^<i>, M_2^<i>, ...) / D(I^<i>, I^<i>, M_2^<i>, ...)
///   p_i     = (1/n) D(I^<i>, I^<i>, M_2^<i>, ...)
/// so that <x, A y>_p = D(diag x, diag y, I, M_2, ...). Assembled column by
/// column from basis vectors. `ms` holds n-3 positive definite n x n matrices.
template <typename T>
WeightedOperator<T> diagonal_operator(std::size_t n, std::span<const Matrix<T>> ms) {
  if (n < 3) throw InputError("diagonal_operator: dimension must be at least 3");
  if (ms.size() + 3 != n)
    throw InputError("diagonal_operator: need n-3 = " + std::to_string(n - 3) + " matrices");
  detail::check_symmetric_list(ms, n, "diagonal_operator");
  for (const auto& mm : ms)
    if (!is_pd(mm)) throw PreconditionError("diagonal_operator: matrices must be positive definite");

  const Matrix<T> eye = Matrix<T>::identity(n - 1);
  WeightedOperator<T> op{Matrix<T>(n, n), Vector<T>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Matrix<T>> args{eye, eye};
    for (const auto& mm : ms) args.push_back(remove_index(mm, i));
    const T denom = mixed_discriminant<T>(args);
    op.weights[i] = denom / T(static_cast<int>(n));
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Matrix<T> ej(n - 1, n - 1);
      const std::size_t jj = j < i ? j : j - 1;
      ej(jj, jj) = T(1);
      args[0] = ej;
      op.matrix(i, j) = mixed_discriminant<T>(args) / denom;
      args[0] = eye;
    }
  }
  return op;
}

template <typename T>
struct TraceIdentities {
  T d1_lhs, d1_rhs;  // D(A,I,..,I) and Tr[A]/k
  T d2_lhs, d2_rhs;  // D(A,A,I,..,I) and (Tr[A]^2 - Tr[A^2]) / (k(k-1))
};

template <typename T>
TraceIdentities<T> trace_identities(const Matrix<T>& a) {
  const std::size_t k = a.rows();
  if (!a.square() || k < 2) throw InputError("trace_identities: need a square matrix, k >= 2");
  if (!is_symmetric(a, 1e-12)) throw InputError("trace_identities: matrix is not symmetric");
  const Matrix<T> eye = Matrix<T>::identity(k);
  std::vector<Matrix<T>> one(k, eye), two(k, eye);
  one[0] = a;
  two[0] = a;
  two[1] = a;
  const T tr = trace(a);
  const T tr2 = trace(Matrix<T>(a * a));
  const T kk(static_cast<int>(k));
  return {mixed_discriminant<T>(one), T(tr / kk), mixed_discriminant<T>(two),
          T((tr * tr - tr2) / (kk * (kk - T(1))))};
}

}  // namespace afv

#endif  // AFV_MIXDISC_HPP
