#ifndef AFV_SAMPLING_HPP
#define AFV_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "afv/geom.hpp"
#include "afv/matrix.hpp"
#include "afv/random.hpp"
#include "afv/rational.hpp"

// Random instances for property checks. Everything draws from a caller-owned
// Rng, so a (seed, index) pair reproduces an instance.
namespace afv::sampling {

/// p/q with |p| <= max_num, 1 <= q <= max_den.
inline Rational rational(Rng& rng, int max_num = 9, int max_den = 6) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  return Rational(num(rng)) / Rational(den(rng));
}

/// p/q in (0, max_num].
inline Rational positive_rational(Rng& rng, int max_num = 9, int max_den = 6) {
  std::uniform_int_distribution<int> num(1, max_num), den(1, max_den);
  return Rational(num(rng)) / Rational(den(rng));
}

inline std::size_t index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Box box(Rng& rng, std::size_t n) {
  std::vector<Rational> sides, anchor;
  for (std::size_t i = 0; i < n; ++i) {
    sides.push_back(positive_rational(rng));
    anchor.push_back(rational(rng));
  }
  return Box(sides, anchor);
}

/// A box with the origin strictly inside: anchor_j = -t_j side_j, t_j in (0,1).
inline Box centered_box(Rng& rng, std::size_t n) {
  std::vector<Rational> sides, anchor;
  std::uniform_int_distribution<int> t(1, 7);
  for (std::size_t i = 0; i < n; ++i) {
    sides.push_back(positive_rational(rng));
    anchor.push_back(-sides.back() * Rational(t(rng)) / Rational(8));
  }
  return Box(sides, anchor);
}

inline Zonotope zonotope(Rng& rng, std::size_t n, std::size_t max_generators = 5) {
  const std::size_t count = index(rng, 1, max_generators);
  std::vector<std::vector<Rational>> gens(count);
  for (auto& g : gens)
    for (std::size_t i = 0; i < n; ++i) g.push_back(rational(rng, 5, 4));
  std::vector<Rational> anchor;
  for (std::size_t i = 0; i < n; ++i) anchor.push_back(rational(rng));
  return Zonotope(n, gens, anchor);
}

/// Sorted angles in [0, 2pi) with every gap in [min_gap, pi - min_gap].
inline std::vector<double> fan_angles(Rng& rng, std::size_t m, double min_gap = 0.05) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  while (true) {
    std::vector<double> a(m);
    for (auto& x : a) x = u(rng);
    std::sort(a.begin(), a.end());
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      const double gap = i + 1 < m ? a[i + 1] - a[i] : a[0] + 2.0 * std::numbers::pi - a[i];
      ok = gap >= min_gap && gap <= std::numbers::pi - min_gap;
    }
    if (ok) return a;
  }
}

/// Support near the unit circle's circumscribed polygon, shrunk until every
/// edge is positive. All values stay positive, so the origin is interior.
inline PolygonFan simple_fan(Rng& rng, const std::vector<double>& angles) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> noise(angles.size());
  for (auto& x : noise) x = u(rng);
  for (double amp = 0.5;; amp *= 0.5) {
    SupportVector h(angles.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = 1.0 + amp * noise[i];
    PolygonFan fan(angles, h);
    if (fan.is_simple(1e-6)) return fan;
  }
}

inline PolygonFan simple_fan(Rng& rng, std::size_t m) { return simple_fan(rng, fan_angles(rng, m)); }

inline Matrix<Rational> symmetric(Rng& rng, std::size_t m, int max_num = 5) {
  Matrix<Rational> a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) a(i, j) = a(j, i) = rational(rng, max_num, 4);
  return a;
}

/// G G^T with G a random rational m x k matrix; PSD, rank <= k.
inline Matrix<Rational> psd(Rng& rng, std::size_t m, std::size_t k) {
  Matrix<Rational> g(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = rational(rng, 4, 3);
  return g * g.transpose();
}

/// G G^T + I / 4: positive definite.
inline Matrix<Rational> pd(Rng& rng, std::size_t m) {
  return psd(rng, m, m) + Matrix<Rational>::identity(m) * Rational(1, 4);
}

inline Matrix<double> symmetric_gaussian(Rng& rng, std::size_t m) {
  std::normal_distribution<double> g;
  Matrix<double> a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

}  // namespace afv::sampling

#endif  // AFV_SAMPLING_HPP
