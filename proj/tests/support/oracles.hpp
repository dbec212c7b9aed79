#ifndef AFV_TESTS_ORACLES_HPP
#define AFV_TESTS_ORACLES_HPP

// Independent reference computations. Nothing here calls the library's
// engines; only its value types (Rational, Matrix, bodies) are shared.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "afv/geom.hpp"
#include "afv/matrix.hpp"
#include "afv/rational.hpp"

namespace oracle {

using afv::Matrix;
using afv::Rational;
using Point = std::array<double, 2>;

/// Determinant by cofactor expansion along the first row.
template <typename T>
T cofactor_det(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  if (n == 0) return T(1);
  if (n == 1) return m(0, 0);
  T total(0);
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == T(0)) continue;
    Matrix<T> minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    const T term = m(0, c) * cofactor_det(minor);
    if (c % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

inline Rational factorial(unsigned n) {
  Rational r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Mixed discriminant as an average over row assignments:
///   D(M_1..M_m) = (1/m!) sum_sigma det(row i taken from M_sigma(i)).
template <typename T>
T mixed_discriminant_by_rows(const std::vector<Matrix<T>>& ms) {
  const std::size_t m = ms.size();
  std::vector<std::size_t> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  T total(0);
  do {
    Matrix<T> x(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) x(i, j) = ms[sigma[i]](i, j);
    total += cofactor_det(x);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  if constexpr (std::is_floating_point_v<T>)
    return total / std::tgamma(static_cast<double>(m) + 1.0);
  else
    return total / factorial(static_cast<unsigned>(m));
}

/// All 2^k vertices (with repeats) of a zonotope.
inline std::vector<std::vector<Rational>> zonotope_points(const afv::Zonotope& z) {
  std::vector<std::vector<Rational>> pts{z.anchor()};
  for (const auto& g : z.generators()) {
    const std::size_t count = pts.size();
    for (std::size_t i = 0; i < count; ++i) {
      auto p = pts[i];
      for (std::size_t j = 0; j < p.size(); ++j) p[j] += g[j];
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

/// Support by brute force over vertices.
inline Rational brute_support(const afv::Zonotope& z, const std::vector<Rational>& d) {
  Rational best;
  bool first = true;
  for (const auto& p : zonotope_points(z)) {
    Rational s = 0;
    for (std::size_t j = 0; j < d.size(); ++j) s += p[j] * d[j];
    if (first || s > best) best = s;
    first = false;
  }
  return best;
}

inline Rational brute_support(const afv::Box& b, const std::vector<Rational>& d) {
  return brute_support(afv::Zonotope::from_box(b), d);
}

/// Volume of a zonotope as |det| summed over generator subsets, via cofactors.
inline Rational zonotope_volume(const afv::Zonotope& z) {
  const std::size_t n = z.dim();
  const auto& g = z.generators();
  Rational v = 0;
  std::vector<bool> pick(g.size(), false);
  if (g.size() < n) return v;
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(n), pick.end(), true);
  do {
    Matrix<Rational> m(n, n);
    for (std::size_t i = 0, c = 0; i < g.size(); ++i)
      if (pick[i]) {
        for (std::size_t r = 0; r < n; ++r) m(r, c) = g[i][r];
        ++c;
      }
    const Rational d = cofactor_det(m);
    v += d < 0 ? Rational(-d) : d;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return v;
}

/// Polarization over zonotopes using the cofactor volume above.
inline Rational polarized_mixed_volume(const std::vector<afv::Zonotope>& zs) {
  const std::size_t n = zs.size();
  Rational total = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::vector<Rational>> gens;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) gens.insert(gens.end(), zs[i].generators().begin(), zs[i].generators().end());
    const Rational v = zonotope_volume(afv::Zonotope(zs[0].dim(), gens));
    if ((n - static_cast<std::size_t>(__builtin_popcount(mask))) % 2 == 0)
      total += v;
    else
      total -= v;
  }
  return total / factorial(static_cast<unsigned>(n));
}

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Convex hull by gift wrapping (a different algorithm from the library's).
inline std::vector<Point> hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h;
  std::size_t start = 0;
  std::size_t cur = start;
  do {
    h.push_back(pts[cur]);
    std::size_t next = (cur + 1) % pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double c = cross(pts[cur], pts[next], pts[i]);
      const double di = std::hypot(pts[i][0] - pts[cur][0], pts[i][1] - pts[cur][1]);
      const double dn = std::hypot(pts[next][0] - pts[cur][0], pts[next][1] - pts[cur][1]);
      if (c < -1e-12 || (std::abs(c) <= 1e-12 && di > dn)) next = i;
    }
    cur = next;
  } while (cur != start && h.size() <= pts.size());
  return h;
}

inline double shoelace(const std::vector<Point>& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * std::abs(a);
}

/// Vertices of a fan's polygon from pairwise intersections of adjacent
/// supporting lines, solved by Cramer's rule.
inline std::vector<Point> fan_vertices(const std::vector<double>& angles, const std::vector<double>& h) {
  std::vector<Point> v;
  const std::size_t m = angles.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const double a = std::cos(angles[i]), b = std::sin(angles[i]);
    const double c = std::cos(angles[j]), d = std::sin(angles[j]);
    const double det = a * d - b * c;
    v.push_back({(h[i] * d - b * h[j]) / det, (a * h[j] - c * h[i]) / det});
  }
  return v;
}

inline std::vector<Point> minkowski_points(const std::vector<Point>& p, const std::vector<Point>& q) {
  std::vector<Point> out;
  for (const auto& a : p)
    for (const auto& b : q) out.push_back({a[0] + b[0], a[1] + b[1]});
  return out;
}

/// V(K, L) = (Area(K + L) - Area(K) - Area(L)) / 2 from vertex lists.
inline double mixed_area_from_vertices(const std::vector<Point>& k, const std::vector<Point>& l) {
  return 0.5 * (shoelace(hull(minkowski_points(k, l))) - shoelace(hull(k)) - shoelace(hull(l)));
}

/// Edge lengths as distances between consecutive fan vertices.
inline std::vector<double> edge_lengths_by_distance(const std::vector<double>& angles,
                                                    const std::vector<double>& h) {
  const auto v = fan_vertices(angles, h);
  const std::size_t m = v.size();
  std::vector<double> len(m);
  // Edge i lies between the vertex with the previous normal and the next one.
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = v[(i + m - 1) % m];
    const auto& b = v[i];
    len[i] = std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return len;
}

}  // namespace oracle

#endif  // AFV_TESTS_ORACLES_HPP
