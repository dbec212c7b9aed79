#ifndef AFV_SPECTRAL_HPP
#define AFV_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "afv/error.hpp"
#include "afv/matrix.hpp"
#include "afv/random.hpp"

namespace afv {

/// A matrix together with positive weights p defining <x,y>_p = sum x_i y_i p_i.
/// The matrix is meant to be self-adjoint for that inner product:
/// p_i A_ij = p_j A_ji.
template <typename T>
struct WeightedOperator {
  Matrix<T> matrix;
  Vector<T> weights;

  std::size_t size() const { return weights.size(); }

  static WeightedOperator uniform(Matrix<T> m) {
    Vector<T> p(m.rows(), T(1));
    return {std::move(m), std::move(p)};
  }
};

using OperatorPair = WeightedOperator<double>;

inline OperatorPair to_double(const WeightedOperator<Rational>& op) {
  return {to_double(op.matrix), to_double(std::span<const Rational>(op.weights))};
}
inline const OperatorPair& to_double(const OperatorPair& op) { return op; }

/// Exact self-adjointness for rationals, relative 1e-10 for doubles.
template <typename T>
bool is_self_adjoint(const WeightedOperator<T>& op, double rel_tol = 1e-10) {
  const std::size_t n = op.size();
  if (!op.matrix.square() || op.matrix.rows() != n) return false;
  if constexpr (is_exact_v<T>) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (op.weights[i] * op.matrix(i, j) != op.weights[j] * op.matrix(j, i)) return false;
    return true;
  } else {
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        scale = std::max(scale, std::abs(op.weights[i] * op.matrix(i, j)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(op.weights[i] * op.matrix(i, j) - op.weights[j] * op.matrix(j, i)) >
            rel_tol * scale)
          return false;
    return true;
  }
}

inline void validate(const OperatorPair& op) {
  if (!op.matrix.square() || op.matrix.rows() != op.weights.size())
    throw InputError("operator: matrix and weight sizes differ");
  for (double w : op.weights)
    if (!(w > 0) || !std::isfinite(w)) throw InputError("operator: weights must be positive");
  for (double x : op.matrix.data())
    if (!std::isfinite(x)) throw InputError("operator: non-finite matrix entry");
  if (!is_self_adjoint(op)) throw InputError("operator: not self-adjoint for its weights");
}

inline double weighted_dot(std::span<const double> x, std::span<const double> y,
                           std::span<const double> p) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i] * p[i];
  return s;
}

/// Eigenvalues sorted descending; column k of `vectors` belongs to values[k].
struct Eigensystem {
  Vector<double> values;
  Matrix<double> vectors;

  Vector<double> vector(std::size_t k) const { return vectors.col(k); }
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Sweeps stop once
/// the off-diagonal Frobenius mass drops below 1e-14 ||S||_F.
inline Eigensystem eigh(const Matrix<double>& s) {
  if (!s.square()) throw InputError("eigh: matrix is not square");
  const double norm = frobenius_norm(s);
  if (!is_symmetric(s, 1e-10)) throw InputError("eigh: matrix is not symmetric");
  const std::size_t n = s.rows();
  Matrix<double> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s(i, j) + s(j, i));
  Matrix<double> v = Matrix<double>::identity(n);

  auto off_mass = [&] {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    return std::sqrt(off);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_mass() <= 1e-14 * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - sn * akq;
          a(k, q) = a(q, k) = sn * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  Eigensystem out{Vector<double>(n), Matrix<double>(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Eigenpairs of an operator self-adjoint in <.,.>_p, via the symmetric
/// similarity P^{1/2} A P^{-1/2}. Eigenvectors come back p-orthonormal.
inline Eigensystem eigh_weighted(const OperatorPair& op) {
  validate(op);
  const std::size_t n = op.size();
  Vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(op.weights[i]);
  Matrix<double> s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = root[i] * op.matrix(i, j) / root[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));
  Eigensystem es = eigh(s);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) /= root[i];
  return es;
}

struct Inertia {
  std::size_t positive = 0;
  std::size_t zero = 0;
  std::size_t negative = 0;

  friend bool operator==(const Inertia&, const Inertia&) = default;
};

inline double default_zero_tol(std::span<const double> eigenvalues) {
  double r = 0;
  for (double l : eigenvalues) r = std::max(r, std::abs(l));
  return 1e-8 * r;
}

/// Counts of eigenvalues above, inside and below the band [-zero_tol, zero_tol].
/// The default band is 1e-8 times the spectral radius.
inline Inertia inertia(std::span<const double> eigenvalues,
                       std::optional<double> zero_tol = std::nullopt) {
  const double tol = zero_tol.value_or(default_zero_tol(eigenvalues));
  Inertia in;
  for (double l : eigenvalues) {
    if (l > tol)
      ++in.positive;
    else if (l < -tol)
      ++in.negative;
    else
      ++in.zero;
  }
  return in;
}
inline Inertia inertia(const Matrix<double>& s, std::optional<double> zero_tol = std::nullopt) {
  return inertia(eigh(s).values, zero_tol);
}
inline Inertia inertia(const OperatorPair& op, std::optional<double> zero_tol = std::nullopt) {
  return inertia(eigh_weighted(op).values, zero_tol);
}

/// A pair (x, y) with <y,Ay> >= 0 and <x,Ay>^2 < <x,Ax><y,Ay>.
struct ReverseCsWitness {
  Vector<double> x;
  Vector<double> y;
  double residual = 0;  // <x,Ay>^2 - <x,Ax><y,Ay>
  bool certified = false;
};

struct HyperbolicityReport {
  Vector<double> eigenvalues;
  Inertia inertia;
  bool hyperbolic = false;  // positive eigenspace of dimension <= 1
  std::size_t samples_drawn = 0;
  std::size_t samples_accepted = 0;
  /// Smallest <x,Ay>^2 - <x,Ax><y,Ay> over sampled p-unit x, y with <y,Ay> >= 0.
  double min_residual = std::numeric_limits<double>::infinity();
  bool sampled_violation = false;
  /// Largest <x,Ax> over sampled p-unit x with <x,Aw> = 0, w the top eigenvector.
  double max_orthogonal_form = -std::numeric_limits<double>::infinity();
  std::optional<ReverseCsWitness> witness;
  double scale = 0;  // squared spectral radius, used for relative thresholds

  /// Condition 1 judged by sampling plus the constructed witness.
  bool reverse_cs_fails() const { return sampled_violation || (witness && witness->certified); }
};

/// Checks whether the form <x,Ay>_p has at most one positive direction, and
/// probes the reverse Cauchy-Schwarz inequality <x,Ay>^2 >= <x,Ax><y,Ay> by
/// sampling. When two or more eigenvalues are positive the top two
/// eigenvectors u, v give an explicit violation: <u,Av> = 0 < l1 l2.
inline HyperbolicityReport hyperbolicity_check(const OperatorPair& op, std::size_t samples,
                                               std::uint64_t seed, double tol = 1e-9) {
  const Eigensystem es = eigh_weighted(op);
  const std::size_t n = op.size();
  HyperbolicityReport rep;
  rep.eigenvalues = es.values;
  rep.inertia = inertia(es.values);
  rep.hyperbolic = rep.inertia.positive <= 1;
  double radius = 0;
  for (double l : es.values) radius = std::max(radius, std::abs(l));
  rep.scale = radius * radius;

  const auto& p = op.weights;
  auto form = [&](std::span<const double> x, std::span<const double> y) {
    const Vector<double> ay = op.matrix * y;
    return weighted_dot(x, ay, p);
  };
  auto normalize = [&](Vector<double>& x) {
    const double nx = std::sqrt(weighted_dot(x, x, p));
    if (nx > 0)
      for (auto& c : x) c /= nx;
  };

  const Vector<double> top = n ? es.vector(0) : Vector<double>{};
  const double top_value = n ? es.values[0] : 0.0;
  const double threshold = -tol * rep.scale;

  Rng rng = sample_rng(seed, 0);
  for (std::size_t k = 0; k < samples && n; ++k) {
    Vector<double> x = gaussian_vector(rng, n);
    Vector<double> y = gaussian_vector(rng, n);
    if (top_value > 0 && k % 2 == 1) {
      std::normal_distribution<double> g(0.0, 2.0);
      const double a = g(rng);
      for (std::size_t i = 0; i < n; ++i) y[i] += a * top[i];
    }
    normalize(x);
    normalize(y);
    ++rep.samples_drawn;
    const double yay = form(y, y);
    if (yay >= 0) {
      ++rep.samples_accepted;
      const double xay = form(x, y);
      const double r = xay * xay - form(x, x) * yay;
      rep.min_residual = std::min(rep.min_residual, r);
      if (r < threshold) rep.sampled_violation = true;
    }
    // Condition 2 with w = top eigenvector: project x onto <x,Aw>_p = 0.
    Vector<double> z = gaussian_vector(rng, n);
    if (top_value > 0) {
      const double c = weighted_dot(z, top, p);
      for (std::size_t i = 0; i < n; ++i) z[i] -= c * top[i];
    }
    normalize(z);
    rep.max_orthogonal_form = std::max(rep.max_orthogonal_form, form(z, z));
  }

  if (rep.inertia.positive >= 2) {
    ReverseCsWitness w{es.vector(0), es.vector(1)};
    const double xay = form(w.x, w.y);
    w.residual = xay * xay - form(w.x, w.x) * form(w.y, w.y);
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                            static_cast<double>(n) * rep.scale;
    w.certified = form(w.y, w.y) >= 0 && w.residual < -roundoff;
    rep.witness = std::move(w);
  }
  return rep;
}

inline HyperbolicityReport hyperbolicity_check(const Matrix<double>& s, std::size_t samples,
                                               std::uint64_t seed, double tol = 1e-9) {
  return hyperbolicity_check(OperatorPair::uniform(s), samples, seed, tol);
}

struct PerronReport {
  bool irreducible = false;
  bool top_simple = false;
  bool top_vector_positive = false;
  double top_value = 0;  // eigenvalue of A (shift removed)
  Vector<double> top_vector;
};

/// Perron-Frobenius structure of a matrix with nonnegative off-diagonal part:
/// irreducibility from the off-diagonal support graph, simplicity and
/// positivity of the top eigenpair of A + cI with c = max|A_ii| + 1.
inline PerronReport perron_check(const Matrix<double>& a, std::span<const double> p,
                                 double tol = 1e-12) {
  if (!a.square() || a.rows() != p.size()) throw InputError("perron_check: size mismatch");
  const std::size_t n = a.rows();
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && a(i, j) < -tol * scale)
        throw PreconditionError("perron_check: negative off-diagonal entry");

  PerronReport rep;
  auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    seen[0] = true;
    q.push(0);
    std::size_t count = 1;
    while (!q.empty()) {
      const std::size_t i = q.front();
      q.pop();
      for (std::size_t j = 0; j < n; ++j) {
        const double w = forward ? a(i, j) : a(j, i);
        if (j != i && !seen[j] && w > tol * scale) {
          seen[j] = true;
          ++count;
          q.push(j);
        }
      }
    }
    return count == n;
  };
  rep.irreducible = n <= 1 || (reaches_all(true) && reaches_all(false));

  double c = 0;
  for (std::size_t i = 0; i < n; ++i) c = std::max(c, std::abs(a(i, i)));
  c += 1.0;
  OperatorPair shifted{a, Vector<double>(p.begin(), p.end())};
  for (std::size_t i = 0; i < n; ++i) shifted.matrix(i, i) += c;
  const Eigensystem es = eigh_weighted(shifted);
  double radius = 0;
  for (double l : es.values) radius = std::max(radius, std::abs(l));
  rep.top_value = es.values[0] - c;
  rep.top_simple = n == 1 || es.values[0] - es.values[1] > 1e-10 * radius;
  rep.top_vector = es.vector(0);
  double sum = std::accumulate(rep.top_vector.begin(), rep.top_vector.end(), 0.0);
  if (sum < 0)
    for (auto& x : rep.top_vector) x = -x;
  double vmax = 0;
  for (double x : rep.top_vector) vmax = std::max(vmax, std::abs(x));
  rep.top_vector_positive = std::all_of(rep.top_vector.begin(), rep.top_vector.end(),
                                        [&](double x) { return x > 1e-12 * vmax; });
  return rep;
}

}  // namespace afv

#endif  // AFV_SPECTRAL_HPP
