#ifndef AFV_MIXVOL_HPP
#define AFV_MIXVOL_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "afv/error.hpp"
#include "afv/geom.hpp"
#include "afv/inequality.hpp"
#include "afv/matrix.hpp"
#include "afv/rational.hpp"

namespace afv {

/// Matrix permanent: direct expansion over permutations up to n = 8, Ryser's
/// inclusion-exclusion formula above.
template <typename T>
T permanent(const Matrix<T>& a) {
  if (!a.square()) throw InputError("permanent of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  if (n <= 8) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    T total(0);
    do {
      T term(1);
      for (std::size_t i = 0; i < n && term != T(0); ++i) term *= a(i, perm[i]);
      total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
  }
  if (n > 30) throw InputError("permanent: matrix too large");
  // Ryser: perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij
  T total(0);
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::vector<T> row_sums(n, T(0));
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t changed = gray ^ gray_prev;
    const auto j = static_cast<std::size_t>(std::countr_zero(changed));
    const bool added = (gray & changed) != 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (added)
        row_sums[i] += a(i, j);
      else
        row_sums[i] -= a(i, j);
    }
    gray_prev = gray;
    T prod(1);
    for (std::size_t i = 0; i < n; ++i) prod *= row_sums[i];
    const bool odd = (std::popcount(gray) % 2) == 1;
    if (odd)
      total -= prod;
    else
      total += prod;
  }
  return (n % 2 == 0) ? total : T(-total);
}

namespace detail {

/// Mixed volume of n boxes in R^n given as rows of side lengths:
/// perm(S)/n!. Valid for arbitrary real rows by multilinearity.
template <typename T>
T box_mixed_volume_from_sides(const Matrix<T>& sides) {
  const T perm = permanent(sides);
  if constexpr (is_exact_v<T>)
    return perm / factorial(static_cast<unsigned>(sides.rows()));
  else
    return perm / std::tgamma(static_cast<double>(sides.rows()) + 1.0);
}

}  // namespace detail

/// V(B_1,...,B_n) = perm(S)/n!, S_ij = side j of box i.
inline Rational mixed_volume_boxes(std::span<const Box> boxes) {
  if (boxes.empty()) throw InputError("mixed_volume_boxes: no boxes");
  const std::size_t n = boxes.front().dim();
  if (boxes.size() != n) throw InputError("mixed_volume_boxes: need exactly dim boxes");
  Matrix<Rational> s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (boxes[i].dim() != n) throw InputError("mixed_volume_boxes: dimension mismatch");
    for (std::size_t j = 0; j < n; ++j) s(i, j) = boxes[i].sides()[j];
  }
  return detail::box_mixed_volume_from_sides(s);
}

/// V(Z_1,...,Z_n) = (1/n!) sum over one generator from each zonotope of |det|.
inline Rational mixed_volume_zonotopes(std::span<const Zonotope> zons) {
  if (zons.empty()) throw InputError("mixed_volume_zonotopes: no zonotopes");
  const std::size_t n = zons.front().dim();
  if (zons.size() != n) throw InputError("mixed_volume_zonotopes: need exactly dim zonotopes");
  for (const auto& z : zons) {
    if (z.dim() != n) throw InputError("mixed_volume_zonotopes: dimension mismatch");
    if (z.generators().empty()) return Rational(0);
  }
  Rational total = 0;
  Matrix<Rational> m(n, n);
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    for (std::size_t c = 0; c < n; ++c) {
      const auto& g = zons[c].generators()[pick[c]];
      for (std::size_t r = 0; r < n; ++r) m(r, c) = g[r];
    }
    total += abs_value(determinant(m));
    std::size_t k = 0;
    while (k < n && ++pick[k] == zons[k].generators().size()) pick[k++] = 0;
    if (k == n) break;
  }
  return total / factorial(static_cast<unsigned>(n));
}

/// V(x, y) = (1/2) sum_i x_i l_i(y) for support vectors on a common fan.
inline double mixed_area(std::span<const double> x, std::span<const double> y,
                         std::span<const double> angles) {
  if (x.size() != angles.size() || y.size() != angles.size())
    throw InputError("mixed_area: support vector length differs from fan size");
  const auto len = edge_lengths(angles, y);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * len[i];
  return 0.5 * s;
}

namespace detail {

template <typename Body, typename Scalar>
auto polarization(std::span<const Body> bodies) {
  const std::size_t n = bodies.size();
  using V = decltype(volume(bodies.front()));
  V total(0);
  std::vector<Body> subset;
  std::vector<Scalar> ones;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    subset.clear();
    ones.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) {
        subset.push_back(bodies[i]);
        ones.push_back(Scalar(1));
      }
    const V vol = volume(minkowski_combine(std::span<const Body>(subset), std::span<const Scalar>(ones)));
    if ((n - subset.size()) % 2 == 0)
      total += vol;
    else
      total -= vol;
  }
  if constexpr (is_exact_v<V>)
    return V(total / factorial(static_cast<unsigned>(n)));
  else
    return V(total / std::tgamma(static_cast<double>(n) + 1.0));
}

struct Family {
  enum class Kind { boxes, zonotopes, fans } kind;
  std::vector<Box> boxes;
  std::vector<Zonotope> zonotopes;
  std::vector<PolygonFan> fans;
};

/// Sorts a body list into one homogeneous family: all boxes, all zonotopes
/// (boxes promoted), or all fans on a common normal set.
inline Family classify(std::span<const ConvexBody> bodies) {
  if (bodies.empty()) throw InputError("mixed volume: no bodies");
  const std::size_t n = dim(bodies.front());
  if (bodies.size() != n)
    throw InputError("mixed volume: need exactly " + std::to_string(n) + " bodies in R^" +
                     std::to_string(n) + ", got " + std::to_string(bodies.size()));
  Family fam{Family::Kind::boxes, {}, {}, {}};
  bool all_box = true, any_fan = false, all_fan = true;
  for (const auto& b : bodies) {
    if (dim(b) != n) throw InputError("mixed volume: dimension mismatch between bodies");
    all_box = all_box && std::holds_alternative<Box>(b);
    any_fan = any_fan || std::holds_alternative<PolygonFan>(b);
    all_fan = all_fan && std::holds_alternative<PolygonFan>(b);
  }
  if (any_fan && !all_fan) throw InputError("mixed volume: cannot mix polygon fans with other bodies");
  if (all_fan) {
    fam.kind = Family::Kind::fans;
    for (const auto& b : bodies) fam.fans.push_back(std::get<PolygonFan>(b));
    fam.fans = common_refinement(fam.fans);
  } else if (all_box) {
    for (const auto& b : bodies) fam.boxes.push_back(std::get<Box>(b));
  } else {
    fam.kind = Family::Kind::zonotopes;
    for (const auto& b : bodies) {
      if (const auto* box = std::get_if<Box>(&b))
        fam.zonotopes.push_back(Zonotope::from_box(*box));
      else
        fam.zonotopes.push_back(std::get<Zonotope>(b));
    }
  }
  return fam;
}

}  // namespace detail

/// Ground truth by polarization:
///   V(K_1..K_n) = (1/n!) sum_{S} (-1)^{n-|S|} Vol(sum_{i in S} K_i).
/// Exact for boxes and zonotopes. Needs 2^n volume evaluations, so n <= 20.
inline Real mixed_volume_oracle(std::span<const ConvexBody> bodies) {
  if (bodies.size() > 20) throw InputError("mixed_volume_oracle: more than 20 bodies");
  const detail::Family fam = detail::classify(bodies);
  switch (fam.kind) {
    case detail::Family::Kind::boxes:
      return detail::polarization<Box, Rational>(fam.boxes);
    case detail::Family::Kind::zonotopes:
      return detail::polarization<Zonotope, Rational>(fam.zonotopes);
    default:
      return detail::polarization<PolygonFan, double>(fam.fans);
  }
}

struct MixedVolume {
  Real value;
  std::string engine;  // "permanent", "zonotope", "mixed_area"
};

/// Closed-form engine for the family: box permanent, zonotope determinant
/// sum, or the fan mixed-area formula.
inline MixedVolume mixed_volume(std::span<const ConvexBody> bodies) {
  const detail::Family fam = detail::classify(bodies);
  switch (fam.kind) {
    case detail::Family::Kind::boxes:
      return {mixed_volume_boxes(fam.boxes), "permanent"};
    case detail::Family::Kind::zonotopes:
      return {mixed_volume_zonotopes(fam.zonotopes), "zonotope"};
    default:
      return {mixed_area(fam.fans[0].support(), fam.fans[1].support(), fam.fans[0].angles()),
              "mixed_area"};
  }
}

/// V(K,L,C..)^2 >= V(K,K,C..) V(L,L,C..) for n-2 reference bodies C.
/// Equality is flagged, never classified.
inline InequalityReport verify_af(const ConvexBody& k, const ConvexBody& l,
                                  std::span<const ConvexBody> refs, double tol = 1e-9) {
  const std::size_t n = dim(k);
  if (n < 2) throw InputError("verify_af: dimension must be at least 2");
  if (refs.size() + 2 != n)
    throw InputError("verify_af: need n-2 = " + std::to_string(n - 2) + " reference bodies");
  auto list = [&](const ConvexBody& a, const ConvexBody& b) {
    std::vector<ConvexBody> v{a, b};
    v.insert(v.end(), refs.begin(), refs.end());
    return v;
  };
  const auto kl = list(k, l), kk = list(k, k), ll = list(l, l);
  const Real v_kl = mixed_volume(kl).value;
  const Real v_kk = mixed_volume(kk).value;
  const Real v_ll = mixed_volume(ll).value;
  if (v_kl.exact() && v_kk.exact() && v_ll.exact()) {
    const Rational& a = v_kl.rational();
    return make_inequality_report<Rational>(a * a, v_kk.rational() * v_ll.rational(), tol);
  }
  const double a = v_kl.to_double();
  return make_inequality_report<double>(a * a, v_kk.to_double() * v_ll.to_double(), tol);
}

}  // namespace afv

#endif  // AFV_MIXVOL_HPP
