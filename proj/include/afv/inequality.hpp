#ifndef AFV_INEQUALITY_HPP
#define AFV_INEQUALITY_HPP

#include <algorithm>
#include <cmath>

#include "afv/matrix.hpp"
#include "afv/rational.hpp"

namespace afv {

/// lhs >= rhs checked against scale = max(|lhs|, |rhs|, 1).
struct InequalityReport {
  Real lhs;
  Real rhs;
  Real gap;  // lhs - rhs
  bool holds = false;
  bool equality = false;
  double tol = 0;

  bool exact() const { return lhs.exact() && rhs.exact(); }
};

template <typename T>
InequalityReport make_inequality_report(const T& lhs, const T& rhs, double tol) {
  InequalityReport rep{lhs, rhs, T(lhs - rhs), false, false, tol};
  if constexpr (is_exact_v<T>) {
    T scale = std::max({abs_value(lhs), abs_value(rhs), T(1)});
    const T band = rational_from_double(tol) * scale;
    const T gap = lhs - rhs;
    rep.holds = gap >= -band;
    rep.equality = abs_value(gap) <= band;
  } else {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    const double gap = lhs - rhs;
    rep.holds = gap >= -tol * scale;
    rep.equality = std::abs(gap) <= tol * scale;
  }
  return rep;
}

}  // namespace afv

#endif  // AFV_INEQUALITY_HPP
