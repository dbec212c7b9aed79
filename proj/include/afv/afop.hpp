#ifndef AFV_AFOP_HPP
#define AFV_AFOP_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afv/error.hpp"
#include "afv/geom.hpp"
#include "afv/inequality.hpp"
#include "afv/matrix.hpp"
#include "afv/mixvol.hpp"
#include "afv/random.hpp"
#include "afv/spectral.hpp"

namespace afv {

// ---------------------------------------------------------------------------
// Planar fans

/// The symmetric matrix of the mixed-area form on a fan: x^T M y = V(x, y).
/// Column j is (1/2) l(e_j).
inline Matrix<double> polygon_form_matrix(std::span<const double> angles) {
  validate_fan_angles(angles);
  const std::size_t m = angles.size();
  Matrix<double> form(m, m);
  std::vector<double> e(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    const auto len = edge_lengths(angles, e);
    for (std::size_t i = 0; i < m; ++i) form(i, j) = 0.5 * len[i];
    e[j] = 0.0;
  }
  return form;
}

/// Support vectors of the points e_1 and e_2: (<z, u_i>)_i.
inline std::vector<SupportVector> polygon_translation_vectors(std::span<const double> angles) {
  SupportVector cx, sy;
  for (double a : angles) {
    cx.push_back(std::cos(a));
    sy.push_back(std::sin(a));
  }
  return {cx, sy};
}

/// Normalized operator for a planar reference polygon P with h_P > 0 and all
/// edges positive:
///   (A x)_u = h_P(u) l_u(x) / l_u(P),   p_u = (1/2) l_u(P) / h_P(u),
/// so that <x, A y>_p = V(x, y) and A h_P = h_P.
inline OperatorPair polygon_af_operator(const PolygonFan& reference) {
  const std::size_t m = reference.size();
  const auto& h = reference.support();
  for (double v : h)
    if (!(v > 0))
      throw PreconditionError(
          "polygon_af_operator: reference support must be positive; translate the polygon so "
          "the origin is interior");
  if (!reference.is_simple())
    throw PreconditionError("polygon_af_operator: reference polygon must have positive edges");
  const auto len_ref = reference.edges();
  const Matrix<double> form = polygon_form_matrix(reference.angles());
  OperatorPair op{Matrix<double>(m, m), Vector<double>(m)};
  for (std::size_t u = 0; u < m; ++u) {
    op.weights[u] = 0.5 * len_ref[u] / h[u];
    for (std::size_t v = 0; v < m; ++v) op.matrix(u, v) = h[u] * 2.0 * form(u, v) / len_ref[u];
  }
  return op;
}

// ---------------------------------------------------------------------------
// Boxes in R^n, directions ordered (+e_1, -e_1, +e_2, -e_2, ...)

inline std::vector<Rational> box_support_vector(const Box& b) {
  std::vector<Rational> h;
  for (std::size_t j = 0; j < b.dim(); ++j) {
    h.push_back(b.anchor()[j] + b.sides()[j]);
    h.push_back(-b.anchor()[j]);
  }
  return h;
}

/// Support vector of the point z on the box directions: (z_1, -z_1, ...).
inline std::vector<Rational> box_translation_vector(std::span<const Rational> z) {
  std::vector<Rational> t;
  for (const auto& c : z) {
    t.push_back(c);
    t.push_back(-c);
  }
  return t;
}

namespace detail {

/// Mixed volume of the facets in direction +-e_j: the first facet is the
/// (n-1)-box whose widths come from the support vector x, the rest from `refs`.
inline Rational facet_mixed_volume(std::span<const Rational> x, std::size_t j,
                                   std::span<const Box> refs) {
  const std::size_t n = refs.front().dim();
  Matrix<Rational> rows(n - 1, n - 1);
  std::size_t c = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    rows(0, c) = x[2 * k] + x[2 * k + 1];
    for (std::size_t r = 1; r < n - 1; ++r) rows(r, c) = refs[r - 1].sides()[k];
    ++c;
  }
  return box_mixed_volume_from_sides(rows);
}

}  // namespace detail

/// Normalized operator for boxes P_3, ..., P_n in R^n (refs.size() == n - 2):
///   (A x)_u = h_{P3}(u) V(F(x,u), F(P3,u), ..., F(Pn,u)) / V(F(P3,u), F(P3,u), ..., F(Pn,u))
///   p_u     = (1/n) V(F(P3,u), F(P3,u), ..., F(Pn,u)) / h_{P3}(u)
/// on the 2n facet directions. Faces of boxes are boxes, so every facet mixed
/// volume is a permanent. Assembled column by column; exact.
inline WeightedOperator<Rational> box_af_operator(std::span<const Box> refs) {
  if (refs.empty()) throw InputError("box_af_operator: need at least one reference box");
  const std::size_t n = refs.front().dim();
  if (n < 3) throw InputError("box_af_operator: dimension must be at least 3");
  if (refs.size() + 2 != n)
    throw InputError("box_af_operator: need n-2 = " + std::to_string(n - 2) + " reference boxes");
  for (const auto& b : refs) {
    if (b.dim() != n) throw InputError("box_af_operator: reference dimension mismatch");
    for (const auto& s : b.sides())
      if (s <= 0) throw PreconditionError("box_af_operator: reference boxes must be full-dimensional");
  }
  const std::vector<Rational> h = box_support_vector(refs.front());
  for (const auto& v : h)
    if (v <= 0)
      throw PreconditionError(
          "box_af_operator: reference support must be positive on all facet directions; "
          "re-center the box so the origin is interior");

  const std::size_t m = 2 * n;
  std::vector<Rational> denom(m);
  for (std::size_t u = 0; u < m; ++u) denom[u] = detail::facet_mixed_volume(h, u / 2, refs);

  WeightedOperator<Rational> op{Matrix<Rational>(m, m), Vector<Rational>(m)};
  std::vector<Rational> e(m, Rational(0));
  for (std::size_t v = 0; v < m; ++v) {
    e[v] = 1;
    for (std::size_t u = 0; u < m; ++u)
      op.matrix(u, v) = h[u] * detail::facet_mixed_volume(e, u / 2, refs) / denom[u];
    e[v] = 0;
  }
  for (std::size_t u = 0; u < m; ++u)
    op.weights[u] = denom[u] / (Rational(static_cast<int>(n)) * h[u]);
  return op;
}

inline WeightedOperator<Rational> box_af_operator(const Box& reference) {
  return box_af_operator(std::span<const Box>(&reference, 1));
}

// ---------------------------------------------------------------------------
// Checks

/// x -> V(x, x, P_3, ...), computed independently of the operator.
using QuadOracle = std::function<double(std::span<const double>)>;

struct BochnerReport {
  double min_residual = std::numeric_limits<double>::infinity();
  double min_sampled = std::numeric_limits<double>::infinity();
  double min_eigenbasis = std::numeric_limits<double>::infinity();
  /// max |oracle(x) - <x,Ax>_p| over samples (0 without an oracle).
  double max_oracle_mismatch = 0;
  /// max |direct residual - sum_k (l_k^2 - l_k) c_k^2| over samples.
  double max_expansion_mismatch = 0;
  std::size_t samples = 0;
  double tol = 0;
  bool holds = false;
};

/// <Ax,Ax>_p - <x,Ax>_p over p-unit x: sampled Gaussian directions plus every
/// p-orthonormal eigenvector. With an oracle, the quadratic term is the
/// oracle's value instead of <x,Ax>_p. Holds iff the minimum is >= -tol.
inline BochnerReport bochner_check(const OperatorPair& op, const QuadOracle& oracle,
                                   std::size_t samples, std::uint64_t seed, double tol = 1e-12) {
  const Eigensystem es = eigh_weighted(op);
  const std::size_t n = op.size();
  const auto& p = op.weights;
  BochnerReport rep;
  rep.samples = samples;
  rep.tol = tol;

  std::vector<Vector<double>> basis;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = es.values[k];
    rep.min_eigenbasis = std::min(rep.min_eigenbasis, l * l - l);
    basis.push_back(es.vector(k));
  }
  Rng rng = sample_rng(seed, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    Vector<double> x = gaussian_vector(rng, n);
    const double nx = std::sqrt(weighted_dot(x, x, p));
    for (auto& c : x) c /= nx;
    const Vector<double> ax = op.matrix * x;
    const double xax = weighted_dot(x, ax, p);
    double quad = xax;
    if (oracle) {
      quad = oracle(x);
      rep.max_oracle_mismatch = std::max(rep.max_oracle_mismatch, std::abs(quad - xax));
    }
    const double r = weighted_dot(ax, ax, p) - quad;
    rep.min_sampled = std::min(rep.min_sampled, r);
    double expansion = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double c = weighted_dot(x, basis[k], p);
      expansion += (es.values[k] * es.values[k] - es.values[k]) * c * c;
    }
    const double direct = weighted_dot(ax, ax, p) - xax;
    rep.max_expansion_mismatch = std::max(rep.max_expansion_mismatch, std::abs(direct - expansion));
  }
  rep.min_residual = std::min(rep.min_sampled, rep.min_eigenbasis);
  rep.holds = rep.min_residual >= -tol;
  return rep;
}

enum class SpectralVerdict { hyperbolic, not_hyperbolic };

inline std::string to_string(SpectralVerdict v) {
  return v == SpectralVerdict::hyperbolic ? "hyperbolic" : "not_hyperbolic";
}

struct SpectralReport {
  Vector<double> eigenvalues;  // descending
  Inertia inertia;
  Vector<double> top_eigenvector;  // p-unit, oriented to positive sum
  bool simple_top = false;
  double bochner_residual_min = 0;
  bool bochner_holds = false;
  /// Every eigenvalue in (-inf, tol] or [1 - tol, 1 + tol].
  bool dichotomy = false;
  std::optional<double> reference_angle;  // radians, between top vector and reference
  bool top_aligned = true;
  SpectralVerdict verdict = SpectralVerdict::not_hyperbolic;
};

inline double angle_between(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a), nb = norm2(b);
  if (na == 0 || nb == 0) return std::numbers::pi / 2;
  const double sign = dot(a, b) >= 0 ? 1.0 : -1.0;
  double diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] / na - sign * b[i] / nb;
    diff += d * d;
  }
  return 2.0 * std::asin(std::min(1.0, std::sqrt(diff) / 2.0));
}

/// Full spectral picture of a normalized operator. The verdict is hyperbolic
/// iff exactly one eigenvalue is positive; the inertia zero band is
/// tol * spectral radius.
inline SpectralReport spectrum_report(const OperatorPair& op,
                                      std::optional<std::span<const double>> reference = std::nullopt,
                                      std::size_t samples = 1000, std::uint64_t seed = 0,
                                      double tol = 1e-9) {
  const Eigensystem es = eigh_weighted(op);
  const std::size_t n = op.size();
  SpectralReport rep;
  rep.eigenvalues = es.values;
  rep.top_eigenvector = es.vector(0);
  double sum = 0;
  for (double x : rep.top_eigenvector) sum += x;
  if (sum < 0)
    for (auto& x : rep.top_eigenvector) x = -x;
  double radius = 0;
  for (double l : es.values) radius = std::max(radius, std::abs(l));
  rep.inertia = inertia(es.values, tol * radius);
  rep.simple_top = n == 1 || es.values[0] - es.values[1] > 1e-10 * radius;
  rep.dichotomy = true;
  for (double l : es.values)
    if (!(l <= tol || std::abs(l - 1.0) <= tol)) rep.dichotomy = false;
  const BochnerReport b = bochner_check(op, {}, samples, seed, 1e-12);
  rep.bochner_residual_min = b.min_residual;
  rep.bochner_holds = b.holds;
  if (reference) {
    if (reference->size() != n) throw InputError("spectrum_report: reference length mismatch");
    rep.reference_angle = angle_between(rep.top_eigenvector, *reference);
    rep.top_aligned = *rep.reference_angle <= 1e-6;
  }
  rep.verdict = rep.inertia.positive == 1 ? SpectralVerdict::hyperbolic : SpectralVerdict::not_hyperbolic;
  return rep;
}

struct SpectralAfReport {
  Inertia certificate;
  InequalityReport direct;  // <x,Ay>^2 against <x,Ax><y,Ay>
};

/// Reverse Cauchy-Schwarz for the form <x, A y>_p, certified by the inertia
/// (one positive eigenvalue) and confirmed on the given pair. `y` plays the
/// role of the body P, so <y,Ay>_p must be nonnegative.
inline SpectralAfReport verify_af_via_spectrum(std::span<const double> x, std::span<const double> y,
                                               const OperatorPair& op, double tol = 1e-9) {
  if (x.size() != op.size() || y.size() != op.size())
    throw InputError("verify_af_via_spectrum: vector length differs from operator size");
  const Inertia in = inertia(op);
  if (in.positive > 1)
    throw PreconditionError("verify_af_via_spectrum: operator is not hyperbolic (" +
                            std::to_string(in.positive) + " positive eigenvalues)");
  const auto& p = op.weights;
  const Vector<double> ax = op.matrix * x;
  const Vector<double> ay = op.matrix * y;
  const double xay = weighted_dot(x, ay, p);
  const double xax = weighted_dot(x, ax, p);
  const double yay = weighted_dot(y, ay, p);
  const double scale = std::max({std::abs(xay * xay), std::abs(xax * yay), 1.0});
  if (yay < -tol * scale) throw PreconditionError("verify_af_via_spectrum: <y,Ay> is negative");
  return {in, make_inequality_report<double>(xay * xay, xax * yay, tol)};
}

}  // namespace afv

#endif  // AFV_AFOP_HPP
