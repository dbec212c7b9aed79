#ifndef AFV_SELFTEST_HPP
#define AFV_SELFTEST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "afv/afop.hpp"
#include "afv/geom.hpp"
#include "afv/mixdisc.hpp"
#include "afv/mixvol.hpp"
#include "afv/sampling.hpp"
#include "afv/spectral.hpp"

namespace afv {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::size_t trials = 0;
  std::string detail;  // first failure, empty on success
};

namespace detail {

/// Runs `trial(rng, i)` for i < trials, each on its own derived generator.
/// A trial returns an empty string on success, a description otherwise.
inline SelftestResult run_trials(const std::string& name, std::size_t trials, std::uint64_t seed,
                                 const std::function<std::string(Rng&, std::size_t)>& trial) {
  SelftestResult res{name, true, trials, {}};
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = sample_rng(seed, i);
    std::string why;
    try {
      why = trial(rng, i);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (!why.empty()) {
      res.passed = false;
      res.detail = "trial " + std::to_string(i) + ": " + why;
      return res;
    }
  }
  return res;
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace detail

/// Property suite over the library's own routes. `samples` scales the trial
/// counts; the seed fixes every instance.
inline std::vector<SelftestResult> selftest(std::size_t samples = 10000, std::uint64_t seed = 0,
                                            double tol = 1e-9) {
  const std::size_t few = std::max<std::size_t>(1, samples / 100);
  const std::size_t some = std::max<std::size_t>(1, samples / 20);
  std::vector<SelftestResult> out;
  std::uint64_t stream = 0;
  auto next_seed = [&] { return derive_seed(seed, ++stream); };

  out.push_back(detail::run_trials("mixed volume engines match polarization", some, next_seed(),
                                   [](Rng& rng, std::size_t) -> std::string {
    const std::size_t n = sampling::index(rng, 1, 4);
    std::vector<ConvexBody> bodies;
    const bool zon = sampling::index(rng, 0, 1) == 1;
    for (std::size_t i = 0; i < n; ++i)
      bodies.push_back(zon && sampling::index(rng, 0, 1) ? ConvexBody(sampling::zonotope(rng, n))
                                                         : ConvexBody(sampling::box(rng, n)));
    const Real a = mixed_volume(bodies).value, b = mixed_volume_oracle(bodies);
    if (a.rational() != b.rational()) return "engine " + a.str() + " vs oracle " + b.str();
    return {};
  }));

  out.push_back(detail::run_trials("mixed volume symmetric, translation invariant, nonnegative",
                                   some, next_seed(), [](Rng& rng, std::size_t) -> std::string {
    const std::size_t n = sampling::index(rng, 2, 4);
    std::vector<ConvexBody> bodies;
    for (std::size_t i = 0; i < n; ++i) bodies.push_back(sampling::zonotope(rng, n));
    const Rational v = mixed_volume(bodies).value.rational();
    if (v < 0) return "negative mixed volume";
    std::vector<ConvexBody> perm(bodies.rbegin(), bodies.rend());
    if (mixed_volume(perm).value.rational() != v) return "not symmetric";
    std::vector<Rational> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back(sampling::rational(rng));
    bodies[0] = std::get<Zonotope>(bodies[0]).translated(t);
    if (mixed_volume(bodies).value.rational() != v) return "not translation invariant";
    return {};
  }));

  out.push_back(detail::run_trials("mixed discriminant calculus", some, next_seed(),
                                   [](Rng& rng, std::size_t) -> std::string {
    const std::size_t m = sampling::index(rng, 2, 4);
    std::vector<Matrix<Rational>> ms;
    for (std::size_t i = 0; i < m; ++i) ms.push_back(sampling::symmetric(rng, m));
    const Rational d = mixed_discriminant(ms);
    if (mixed_discriminant(std::vector<Matrix<Rational>>(m, ms[0])) != determinant(ms[0]))
      return "D(M,...,M) != det M";
    std::vector<Matrix<Rational>> rev(ms.rbegin(), ms.rend());
    if (mixed_discriminant(rev) != d) return "not symmetric";
    Matrix<Rational> u(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) u(i, j) = sampling::rational(rng, 3, 2);
    std::vector<Matrix<Rational>> conj;
    for (const auto& x : ms) conj.push_back(u * x * u.transpose());
    if (mixed_discriminant(conj) != determinant(Matrix<Rational>(u * u.transpose())) * d)
      return "conjugation rule fails";
    const std::size_t i = sampling::index(rng, 0, m - 1);
    const auto pair = md_minor_identity<Rational>(i, std::span<const Matrix<Rational>>(ms).subspan(1));
    if (pair.lhs != pair.rhs) return "minor identity fails";
    const auto tr = trace_identities(ms[0]);
    if (tr.d1_lhs != tr.d1_rhs || tr.d2_lhs != tr.d2_rhs) return "trace identities fail";
    return {};
  }));

  out.push_back(detail::run_trials("Alexandrov inequality for mixed discriminants", some,
                                   next_seed(), [tol](Rng& rng, std::size_t) -> std::string {
    const std::size_t m = sampling::index(rng, 2, 5);
    const auto a = sampling::symmetric(rng, m);
    const auto b = sampling::psd(rng, m, sampling::index(rng, 1, m));
    std::vector<Matrix<Rational>> ms;
    for (std::size_t i = 0; i + 2 < m; ++i) ms.push_back(sampling::psd(rng, m, sampling::index(rng, 1, m)));
    const auto rep = verify_alexandrov<Rational>(a, b, ms, tol);
    if (!rep.holds) return "violated: " + rep.lhs.str() + " < " + rep.rhs.str();
    return {};
  }));

  out.push_back(detail::run_trials("Alexandrov-Fenchel for boxes and zonotopes", some, next_seed(),
                                   [tol](Rng& rng, std::size_t) -> std::string {
    const std::size_t n = sampling::index(rng, 3, 4);
    auto body = [&]() -> ConvexBody {
      return sampling::index(rng, 0, 1) ? ConvexBody(sampling::box(rng, n))
                                        : ConvexBody(sampling::zonotope(rng, n, 4));
    };
    const ConvexBody k = body(), l = body();
    std::vector<ConvexBody> refs;
    for (std::size_t i = 0; i + 2 < n; ++i) refs.push_back(body());
    const auto rep = verify_af(k, l, refs, tol);
    if (!rep.holds) return "violated: " + rep.lhs.str() + " < " + rep.rhs.str();
    return {};
  }));

  out.push_back(detail::run_trials("Alexandrov-Fenchel for polygons", some, next_seed(),
                                   [tol](Rng& rng, std::size_t) -> std::string {
    const auto angles = sampling::fan_angles(rng, sampling::index(rng, 3, 12));
    const PolygonFan k = sampling::simple_fan(rng, angles), l = sampling::simple_fan(rng, angles);
    const auto rep = verify_af(k, l, {}, tol);
    if (!rep.holds) return "violated: " + rep.lhs.str() + " < " + rep.rhs.str();
    return {};
  }));

  out.push_back(detail::run_trials("polygon form inertia (1, 2, m-3)", few, next_seed(),
                                   [](Rng& rng, std::size_t) -> std::string {
    const std::size_t m = sampling::index(rng, 3, 16);
    const Inertia in = inertia(polygon_form_matrix(sampling::fan_angles(rng, m)));
    if (!(in == Inertia{1, 2, m - 3}))
      return "inertia (" + std::to_string(in.positive) + "," + std::to_string(in.zero) + "," +
             std::to_string(in.negative) + ") for m = " + std::to_string(m);
    return {};
  }));

  out.push_back(detail::run_trials("box operator: normalization, self-adjointness, dichotomy", few,
                                   next_seed(), [tol](Rng& rng, std::size_t) -> std::string {
    const Box ref = sampling::centered_box(rng, 3);
    const auto op = box_af_operator(ref);
    const auto h = box_support_vector(ref);
    if (op.matrix * h != h) return "A h != h";
    if (!is_self_adjoint(op)) return "not self-adjoint";
    const auto rep = spectrum_report(to_double(op), std::span<const double>(to_double(h)), 200, 0, tol);
    if (!rep.dichotomy) return "eigenvalue outside (-inf,0] u {1}";
    if (!rep.simple_top || !rep.top_aligned) return "top eigenvector not simple or not along h";
    return {};
  }));

  out.push_back(detail::run_trials("Bochner inequality for fan, box and diagonal operators", few,
                                   next_seed(), [](Rng& rng, std::size_t i) -> std::string {
    OperatorPair op;
    switch (i % 3) {
      case 0:
        op = polygon_af_operator(sampling::simple_fan(rng, sampling::index(rng, 3, 12)));
        break;
      case 1:
        op = to_double(box_af_operator(sampling::centered_box(rng, 3)));
        break;
      default: {
        const std::size_t n = sampling::index(rng, 3, 5);
        std::vector<Matrix<Rational>> ms;
        for (std::size_t k = 0; k + 3 < n; ++k) ms.push_back(sampling::pd(rng, n));
        op = to_double(diagonal_operator<Rational>(n, ms));
      }
    }
    const auto rep = bochner_check(op, {}, 200, i, 1e-12);
    if (!rep.holds) return "min residual " + to_string(rep.min_residual);
    return {};
  }));

  out.push_back(detail::run_trials("hyperbolicity verdict agrees with reverse Cauchy-Schwarz", few,
                                   next_seed(), [](Rng& rng, std::size_t i) -> std::string {
    const std::size_t m = sampling::index(rng, 1, 6);
    const auto s = sampling::symmetric_gaussian(rng, m);
    const auto rep = hyperbolicity_check(s, 500, i);
    if (rep.hyperbolic == rep.reverse_cs_fails()) return "verdict disagrees with sampled condition";
    return {};
  }));

  {
    SelftestResult neg{"negative controls are rejected with a witness", true, 2, {}};
    for (const auto& s : {Matrix<double>::identity(2), Matrix<double>::identity(4)}) {
      const auto rep = hyperbolicity_check(s, 100, seed);
      if (rep.hyperbolic || !rep.witness || !rep.witness->certified) {
        neg.passed = false;
        neg.detail = "identity of size " + std::to_string(s.rows()) + " accepted";
      }
    }
    out.push_back(neg);
  }

  out.push_back(detail::run_trials("eigensolver residuals", few, next_seed(),
                                   [](Rng& rng, std::size_t) -> std::string {
    const std::size_t m = sampling::index(rng, 1, 24);
    const auto s = sampling::symmetric_gaussian(rng, m);
    const auto es = eigh(s);
    const double scale = std::max(frobenius_norm(s), 1e-300);
    for (std::size_t k = 0; k < m; ++k) {
      const auto v = es.vector(k);
      auto r = s * v;
      for (std::size_t j = 0; j < m; ++j) r[j] -= es.values[k] * v[j];
      if (norm2(r) > 1e-9 * scale) return "residual too large";
      for (std::size_t l = 0; l < m; ++l) {
        const double d = dot<double>(v, es.vector(l)) - (k == l ? 1.0 : 0.0);
        if (std::abs(d) > 1e-10) return "eigenvectors not orthonormal";
      }
    }
    return {};
  }));

  return out;
}

}  // namespace afv

#endif  // AFV_SELFTEST_HPP
