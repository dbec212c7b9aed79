#ifndef AFV_GEOM_HPP
#define AFV_GEOM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "afv/error.hpp"
#include "afv/matrix.hpp"
#include "afv/rational.hpp"

namespace afv {

/// Axis-aligned box anchor + [0, s_1] x ... x [0, s_d].
class Box {
 public:
  Box(std::vector<Rational> sides, std::vector<Rational> anchor = {})
      : sides_(std::move(sides)), anchor_(std::move(anchor)) {
    if (sides_.empty()) throw InputError("box: dimension must be at least 1");
    if (anchor_.empty()) anchor_.assign(sides_.size(), Rational(0));
    if (anchor_.size() != sides_.size()) throw InputError("box: anchor length differs from dim");
    for (const auto& s : sides_)
      if (s < 0) throw InputError("box: side lengths must be nonnegative");
  }

  std::size_t dim() const { return sides_.size(); }
  const std::vector<Rational>& sides() const { return sides_; }
  const std::vector<Rational>& anchor() const { return anchor_; }

  Box translated(std::span<const Rational> t) const {
    if (t.size() != dim()) throw InputError("box: translation dimension mismatch");
    std::vector<Rational> a = anchor_;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += t[i];
    return Box(sides_, std::move(a));
  }

 private:
  std::vector<Rational> sides_;
  std::vector<Rational> anchor_;
};

/// anchor + [0, v_1] + ... + [0, v_m].
class Zonotope {
 public:
  Zonotope(std::size_t dim, std::vector<std::vector<Rational>> generators,
           std::vector<Rational> anchor = {})
      : dim_(dim), generators_(std::move(generators)), anchor_(std::move(anchor)) {
    if (dim_ == 0) throw InputError("zonotope: dimension must be at least 1");
    if (anchor_.empty()) anchor_.assign(dim_, Rational(0));
    if (anchor_.size() != dim_) throw InputError("zonotope: anchor length differs from dim");
    for (const auto& g : generators_)
      if (g.size() != dim_) throw InputError("zonotope: generator length differs from dim");
  }

  /// A box is the zonotope generated by s_j e_j.
  static Zonotope from_box(const Box& b) {
    std::vector<std::vector<Rational>> gens;
    for (std::size_t j = 0; j < b.dim(); ++j) {
      std::vector<Rational> g(b.dim(), Rational(0));
      g[j] = b.sides()[j];
      gens.push_back(std::move(g));
    }
    return Zonotope(b.dim(), std::move(gens), b.anchor());
  }

  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<Rational>>& generators() const { return generators_; }
  const std::vector<Rational>& anchor() const { return anchor_; }

  Zonotope translated(std::span<const Rational> t) const {
    if (t.size() != dim_) throw InputError("zonotope: translation dimension mismatch");
    std::vector<Rational> a = anchor_;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += t[i];
    return Zonotope(dim_, generators_, std::move(a));
  }

 private:
  std::size_t dim_;
  std::vector<std::vector<Rational>> generators_;
  std::vector<Rational> anchor_;
};

/// Support values indexed by an ordered direction set. Entries may have any
/// sign (differences of support vectors are allowed).
using SupportVector = std::vector<double>;

namespace detail {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// gaps[i] is the angle from normal i-1 to normal i (cyclically).
inline std::vector<double> fan_gaps(std::span<const double> angles) {
  const std::size_t m = angles.size();
  std::vector<double> gaps(m);
  for (std::size_t i = 0; i < m; ++i)
    gaps[i] = i == 0 ? angles[0] + two_pi - angles[m - 1] : angles[i] - angles[i - 1];
  return gaps;
}

}  // namespace detail

/// Throws InputError unless the angles describe a valid polygon fan: m >= 3,
/// each angle in [0, 2pi), strictly increasing, every cyclic gap in (0, pi).
inline void validate_fan_angles(std::span<const double> angles) {
  if (angles.size() < 3) throw InputError("polygon fan: need at least 3 normals");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!(angles[i] >= 0.0 && angles[i] < detail::two_pi))
      throw InputError("polygon fan: angles must lie in [0, 2pi)");
    if (i > 0 && !(angles[i] > angles[i - 1]))
      throw InputError("polygon fan: angles must be strictly increasing");
  }
  for (double g : detail::fan_gaps(angles))
    if (!(g > 0.0 && g < std::numbers::pi))
      throw InputError("polygon fan: consecutive normals must be less than pi apart");
}

inline std::array<double, 2> unit_normal(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Facet lengths of the polygon {x : <x,u_i> <= h_i} read off linearly from h:
///   l_i = csc(g_i)(h_{i-1} - h_i cos g_i) + csc(g_{i+1})(h_{i+1} - h_i cos g_{i+1}),
/// g_i the angle between u_{i-1} and u_i. For h that is not a genuine support
/// vector this is the linear extension, and entries may be negative.
inline std::vector<double> edge_lengths(std::span<const double> angles, std::span<const double> h) {
  validate_fan_angles(angles);
  const std::size_t m = angles.size();
  if (h.size() != m) throw InputError("edge_lengths: support length differs from fan size");
  const std::vector<double> gaps = detail::fan_gaps(angles);
  std::vector<double> len(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t prev = (i + m - 1) % m;
    const std::size_t next = (i + 1) % m;
    const double g0 = gaps[i];
    const double g1 = gaps[next];
    len[i] = (h[prev] - h[i] * std::cos(g0)) / std::sin(g0) +
             (h[next] - h[i] * std::cos(g1)) / std::sin(g1);
  }
  return len;
}

/// A polygon given by outer normal angles and its support values on them.
class PolygonFan {
 public:
  PolygonFan(std::vector<double> angles, SupportVector support)
      : angles_(std::move(angles)), support_(std::move(support)) {
    validate_fan_angles(angles_);
    if (support_.size() != angles_.size())
      throw InputError("polygon fan: support length differs from number of normals");
    for (double h : support_)
      if (!std::isfinite(h)) throw InputError("polygon fan: non-finite support value");
  }

  std::size_t size() const { return angles_.size(); }
  const std::vector<double>& angles() const { return angles_; }
  const SupportVector& support() const { return support_; }
  std::vector<double> edges() const { return edge_lengths(angles_, support_); }

  /// All edges >= -tol * scale: the support vector describes an actual polygon.
  bool is_polygon(double tol = 1e-10) const { return min_relative_edge() >= -tol; }
  /// All edges > tol * scale: a simple representative of its normal fan.
  bool is_simple(double tol = 1e-10) const { return min_relative_edge() > tol; }

  bool same_fan(const PolygonFan& o) const { return angles_ == o.angles_; }

 private:
  double min_relative_edge() const {
    double scale = 1.0;
    for (double h : support_) scale = std::max(scale, std::abs(h));
    double lo = std::numeric_limits<double>::infinity();
    for (double l : edges()) lo = std::min(lo, l / scale);
    return lo;
  }

  std::vector<double> angles_;
  SupportVector support_;
};

using ConvexBody = std::variant<Box, Zonotope, PolygonFan>;

inline std::size_t dim(const ConvexBody& body) {
  return std::visit(
      [](const auto& b) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, PolygonFan>)
          return 2;
        else
          return b.dim();
      },
      body);
}

inline std::string kind_name(const ConvexBody& body) {
  switch (body.index()) {
    case 0:
      return "box";
    case 1:
      return "zonotope";
    default:
      return "polygon_fan";
  }
}

// ---------------------------------------------------------------------------
// Support functions

namespace detail {
template <typename Dir>
void check_direction(std::size_t dim, const Dir& d) {
  if (d.size() != dim) throw InputError("support: direction dimension mismatch");
  bool nonzero = false;
  for (const auto& x : d) nonzero = nonzero || x != 0;
  if (!nonzero) throw InputError("support: direction must be nonzero");
}
}  // namespace detail

inline Rational support(const Box& b, std::span<const Rational> d) {
  detail::check_direction(b.dim(), d);
  Rational s = 0;
  for (std::size_t j = 0; j < b.dim(); ++j) {
    s += b.anchor()[j] * d[j];
    if (d[j] > 0) s += b.sides()[j] * d[j];
  }
  return s;
}

inline Rational support(const Zonotope& z, std::span<const Rational> d) {
  detail::check_direction(z.dim(), d);
  Rational s = dot(std::span<const Rational>(z.anchor()), d);
  for (const auto& g : z.generators()) {
    const Rational gd = dot(std::span<const Rational>(g), d);
    if (gd > 0) s += gd;
  }
  return s;
}

/// Vertices of a fan polygon; vertex i joins edge i and edge i+1.
inline std::vector<std::array<double, 2>> vertices(const PolygonFan& fan) {
  const std::size_t m = fan.size();
  std::vector<std::array<double, 2>> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const auto u = unit_normal(fan.angles()[i]);
    const auto w = unit_normal(fan.angles()[j]);
    const double det = u[0] * w[1] - u[1] * w[0];
    const double hi = fan.support()[i], hj = fan.support()[j];
    v[i] = {(hi * w[1] - hj * u[1]) / det, (u[0] * hj - w[0] * hi) / det};
  }
  return v;
}

/// Support in an arbitrary direction; only meaningful for genuine polygons.
inline double support(const PolygonFan& fan, std::array<double, 2> d) {
  if (d[0] == 0 && d[1] == 0) throw InputError("support: direction must be nonzero");
  if (!fan.is_polygon())
    throw InputError("support: fan support vector has negative edges (not a polygon)");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices(fan)) best = std::max(best, v[0] * d[0] + v[1] * d[1]);
  return best;
}

inline Real support(const ConvexBody& body, std::span<const Rational> d) {
  if (const auto* b = std::get_if<Box>(&body)) return support(*b, d);
  if (const auto* z = std::get_if<Zonotope>(&body)) return support(*z, d);
  if (d.size() != 2) throw InputError("support: direction dimension mismatch");
  return support(std::get<PolygonFan>(body), {to_double(d[0]), to_double(d[1])});
}

// ---------------------------------------------------------------------------
// Fan utilities

/// The polygon with the given vertices (any order; interior points ignored),
/// as a fan of its edge normals.
inline PolygonFan fan_from_vertices(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw InputError("polygon: need at least 3 distinct vertices");
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  // Andrew's monotone chain, counterclockwise, collinear points dropped.
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw InputError("polygon: vertices are collinear");
  std::vector<std::pair<double, double>> facets;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    double angle = std::atan2(-(b[0] - a[0]), b[1] - a[1]);
    if (angle < 0) angle += detail::two_pi;
    if (angle >= detail::two_pi) angle = 0;
    const auto u = unit_normal(angle);
    facets.emplace_back(angle, u[0] * a[0] + u[1] * a[1]);
  }
  std::sort(facets.begin(), facets.end());
  std::vector<double> angles, h;
  for (const auto& [a, s] : facets) {
    angles.push_back(a);
    h.push_back(s);
  }
  return PolygonFan(std::move(angles), std::move(h));
}

/// Same polygon expressed on the union of its normals and `extra` (extra
/// directions become zero-length edges). The fan must be a genuine polygon.
inline PolygonFan refine(const PolygonFan& fan, std::span<const double> extra) {
  std::vector<double> angles = fan.angles();
  for (double a : extra) {
    bool present = false;
    for (double b : angles) present = present || std::abs(a - b) <= 1e-12;
    if (!present) angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  if (angles.size() == fan.size()) return fan;
  SupportVector h;
  for (double a : angles) h.push_back(support(fan, unit_normal(a)));
  return PolygonFan(std::move(angles), std::move(h));
}

/// Puts fans onto a common normal set. Fans already sharing normals pass
/// through unchanged; otherwise every fan must be a genuine polygon.
inline std::vector<PolygonFan> common_refinement(std::span<const PolygonFan> fans) {
  std::vector<PolygonFan> out(fans.begin(), fans.end());
  bool same = true;
  for (const auto& f : fans) same = same && f.same_fan(fans.front());
  if (same) return out;
  std::vector<double> all;
  for (const auto& f : fans) all.insert(all.end(), f.angles().begin(), f.angles().end());
  for (auto& f : out) {
    if (!f.is_polygon())
      throw InputError("fans with different normals can only be merged when they are polygons");
    f = refine(f, all);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minkowski combinations

inline Box minkowski_combine(std::span<const Box> boxes, std::span<const Rational> coeffs) {
  if (boxes.empty() || boxes.size() != coeffs.size())
    throw InputError("minkowski_combine: need one coefficient per body");
  const std::size_t d = boxes.front().dim();
  std::vector<Rational> sides(d, Rational(0)), anchor(d, Rational(0));
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (coeffs[i] < 0) throw InputError("minkowski_combine: coefficients must be nonnegative");
    if (boxes[i].dim() != d) throw InputError("minkowski_combine: dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) {
      sides[j] += coeffs[i] * boxes[i].sides()[j];
      anchor[j] += coeffs[i] * boxes[i].anchor()[j];
    }
  }
  return Box(std::move(sides), std::move(anchor));
}

inline Zonotope minkowski_combine(std::span<const Zonotope> zons, std::span<const Rational> coeffs) {
  if (zons.empty() || zons.size() != coeffs.size())
    throw InputError("minkowski_combine: need one coefficient per body");
  const std::size_t d = zons.front().dim();
  std::vector<std::vector<Rational>> gens;
  std::vector<Rational> anchor(d, Rational(0));
  for (std::size_t i = 0; i < zons.size(); ++i) {
    if (coeffs[i] < 0) throw InputError("minkowski_combine: coefficients must be nonnegative");
    if (zons[i].dim() != d) throw InputError("minkowski_combine: dimension mismatch");
    for (const auto& g : zons[i].generators()) {
      std::vector<Rational> s(g);
      for (auto& x : s) x *= coeffs[i];
      gens.push_back(std::move(s));
    }
    for (std::size_t j = 0; j < d; ++j) anchor[j] += coeffs[i] * zons[i].anchor()[j];
  }
  return Zonotope(d, std::move(gens), std::move(anchor));
}

inline PolygonFan minkowski_combine(std::span<const PolygonFan> fans, std::span<const double> coeffs) {
  if (fans.empty() || fans.size() != coeffs.size())
    throw InputError("minkowski_combine: need one coefficient per body");
  SupportVector h(fans.front().size(), 0.0);
  for (std::size_t i = 0; i < fans.size(); ++i) {
    if (coeffs[i] < 0) throw InputError("minkowski_combine: coefficients must be nonnegative");
    if (!fans[i].same_fan(fans.front()))
      throw InputError("minkowski_combine: polygon fans must share identical normals");
    for (std::size_t k = 0; k < h.size(); ++k) h[k] += coeffs[i] * fans[i].support()[k];
  }
  return PolygonFan(fans.front().angles(), std::move(h));
}

/// Variant-level combination. Boxes mixed with zonotopes are promoted to
/// zonotopes; fans cannot be mixed with the other kinds.
inline ConvexBody minkowski_combine(std::span<const ConvexBody> bodies,
                                    std::span<const Rational> coeffs) {
  if (bodies.empty()) throw InputError("minkowski_combine: no bodies");
  bool all_box = true, any_fan = false, all_fan = true;
  for (const auto& b : bodies) {
    all_box = all_box && std::holds_alternative<Box>(b);
    any_fan = any_fan || std::holds_alternative<PolygonFan>(b);
    all_fan = all_fan && std::holds_alternative<PolygonFan>(b);
  }
  if (all_box) {
    std::vector<Box> v;
    for (const auto& b : bodies) v.push_back(std::get<Box>(b));
    return minkowski_combine(std::span<const Box>(v), coeffs);
  }
  if (all_fan) {
    std::vector<PolygonFan> v;
    for (const auto& b : bodies) v.push_back(std::get<PolygonFan>(b));
    return minkowski_combine(std::span<const PolygonFan>(v),
                             std::span<const double>(to_double(coeffs)));
  }
  if (any_fan) throw InputError("minkowski_combine: cannot mix polygon fans with other bodies");
  std::vector<Zonotope> v;
  for (const auto& b : bodies) {
    if (const auto* box = std::get_if<Box>(&b))
      v.push_back(Zonotope::from_box(*box));
    else
      v.push_back(std::get<Zonotope>(b));
  }
  return minkowski_combine(std::span<const Zonotope>(v), coeffs);
}

// ---------------------------------------------------------------------------
// Volumes

inline Rational volume(const Box& b) {
  Rational v = 1;
  for (const auto& s : b.sides()) v *= s;
  return v;
}

/// Sum over dim-subsets of generators of |det|; rank-deficient sets give 0.
inline Rational volume(const Zonotope& z) {
  const std::size_t n = z.dim();
  const auto& g = z.generators();
  Rational v = 0;
  Matrix<Rational> m(n, n);
  for_each_combination(g.size(), n, [&](std::span<const std::size_t> idx) {
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) m(r, c) = g[idx[c]][r];
    v += abs_value(determinant(m));
  });
  return v;
}

/// (1/2) sum_i h_i l_i(h).
inline double volume(const PolygonFan& fan) {
  const auto len = fan.edges();
  double v = 0;
  for (std::size_t i = 0; i < fan.size(); ++i) v += fan.support()[i] * len[i];
  return 0.5 * v;
}

inline Real volume(const ConvexBody& body) {
  return std::visit([](const auto& b) -> Real { return volume(b); }, body);
}

}  // namespace afv

#endif  // AFV_GEOM_HPP
