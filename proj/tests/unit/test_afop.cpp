#include <gtest/gtest.h>

#include <numbers>

#include "afv/afop.hpp"
#include "afv/mixdisc.hpp"
#include "afv/sampling.hpp"
#include "support/oracles.hpp"

using namespace afv;

namespace {

const double pi = std::numbers::pi;
const std::vector<double> square_angles{0, pi / 2, pi, 3 * pi / 2};

std::vector<double> regular_angles(std::size_t m) {
  std::vector<double> a;
  for (std::size_t i = 0; i < m; ++i) a.push_back(2 * pi * static_cast<double>(i) / static_cast<double>(m));
  return a;
}

Box centered_cube() {
  const Rational h(-1, 2);
  return Box({1, 1, 1}, {h, h, h});
}

/// V(x, x, P) for boxes in R^3 straight from the mixed-area sum over
/// facets: (1/3) sum_u h_P(u) V(F(x,u), F(x,u)), where F(x, +-e_j) is the
/// rectangle with the widths of x in the other two coordinates.
double box_quadratic(std::span<const double> x, const Box& p) {
  const auto h = to_double(box_support_vector(p));
  double total = 0;
  for (std::size_t u = 0; u < 6; ++u) {
    const std::size_t j = u / 2, k = (j + 1) % 3, l = (j + 2) % 3;
    const double wk = x[2 * k] + x[2 * k + 1], wl = x[2 * l] + x[2 * l + 1];
    total += h[u] * wk * wl;
  }
  return total / 3.0;
}

}  // namespace

TEST(PolygonForm, SquareFan) {
  const auto m = polygon_form_matrix(square_angles);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool neighbour = (i + 1) % 4 == j || (j + 1) % 4 == i;
      EXPECT_NEAR(m(i, j), neighbour ? 0.5 : 0.0, 1e-15);
    }
  EXPECT_EQ(inertia(m), (Inertia{1, 2, 1}));
  const auto es = eigh(m);
  EXPECT_NEAR(es.values[0], 1, 1e-14);
  EXPECT_NEAR(es.values[3], -1, 1e-14);
}

TEST(PolygonForm, TranslationKernel) {
  for (std::size_t t = 0; t < 50; ++t) {
    Rng rng = sample_rng(51, t);
    const auto angles = sampling::fan_angles(rng, sampling::index(rng, 3, 16));
    const auto m = polygon_form_matrix(angles);
    for (const auto& z : polygon_translation_vectors(angles))
      for (double r : m * z) EXPECT_NEAR(r, 0, 1e-10);
  }
}

TEST(PolygonForm, BilinearFormIsMixedArea) {
  Rng rng = sample_rng(52, 0);
  const auto angles = sampling::fan_angles(rng, 7);
  const auto m = polygon_form_matrix(angles);
  EXPECT_TRUE(is_symmetric(m, 1e-10));
  for (std::size_t t = 0; t < 20; ++t) {
    const auto x = gaussian_vector(rng, 7), y = gaussian_vector(rng, 7);
    EXPECT_NEAR(dot<double>(x, m * y), mixed_area(x, y, angles), 1e-12);
  }
}

TEST(PolygonForm, RegularPolygonInertia) {
  for (std::size_t m = 3; m <= 16; ++m) EXPECT_EQ(inertia(polygon_form_matrix(regular_angles(m))), (Inertia{1, 2, m - 3}));
}

TEST(PolygonForm, RandomFanInertia) {
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng = sample_rng(53, t);
    const std::size_t m = sampling::index(rng, 3, 16);
    EXPECT_EQ(inertia(polygon_form_matrix(sampling::fan_angles(rng, m))), (Inertia{1, 2, m - 3}));
  }
}

TEST(PolygonOperator, NormalizationAndForm) {
  for (std::size_t t = 0; t < 50; ++t) {
    Rng rng = sample_rng(54, t);
    const PolygonFan p = sampling::simple_fan(rng, sampling::index(rng, 3, 12));
    const auto op = polygon_af_operator(p);
    EXPECT_TRUE(is_self_adjoint(op));
    const auto ah = op.matrix * p.support();
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(ah[i], p.support()[i], 1e-12);
    const auto x = gaussian_vector(rng, p.size()), y = gaussian_vector(rng, p.size());
    EXPECT_NEAR(weighted_dot(x, op.matrix * y, op.weights), mixed_area(x, y, p.angles()), 1e-10);
  }
}

TEST(PolygonOperator, Preconditions) {
  EXPECT_THROW(polygon_af_operator(PolygonFan(square_angles, {1, 0, 1, 1})), PreconditionError);
  EXPECT_THROW(polygon_af_operator(PolygonFan(square_angles, {1, 1, -0.5, 1})), PreconditionError);
}

TEST(BoxOperator, CenteredCube) {
  const auto op = box_af_operator(centered_cube());
  for (std::size_t u = 0; u < 6; ++u) {
    EXPECT_EQ(op.weights[u], Rational(2, 3));
    for (std::size_t v = 0; v < 6; ++v) EXPECT_EQ(op.matrix(u, v), u / 2 == v / 2 ? Rational(0) : Rational(1, 4));
  }
  const auto rep = spectrum_report(to_double(op));
  const std::vector<double> expect{1, 0, 0, 0, -0.5, -0.5};
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(rep.eigenvalues[k], expect[k], 1e-9);
  EXPECT_EQ(rep.inertia, (Inertia{1, 3, 2}));
  EXPECT_EQ(inertia(to_double(op)), (Inertia{1, 3, 2}));
  for (double x : rep.top_eigenvector) EXPECT_NEAR(x, 0.5, 1e-12);
}

TEST(BoxOperator, NormalizationSelfAdjointnessKernel) {
  for (std::size_t t = 0; t < 100; ++t) {
    Rng rng = sample_rng(55, t);
    const Box p = sampling::centered_box(rng, 3);
    const auto op = box_af_operator(p);
    const auto h = box_support_vector(p);
    EXPECT_EQ(op.matrix * h, h);
    EXPECT_TRUE(is_self_adjoint(op));
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<Rational> z(3, Rational(0));
      z[j] = 1;
      for (const auto& r : op.matrix * box_translation_vector(z)) EXPECT_EQ(r, 0);
    }
    const auto d = to_double(op);
    const auto x = gaussian_vector(rng, 6);
    EXPECT_NEAR(weighted_dot(x, d.matrix * x, d.weights), box_quadratic(x, p), 1e-10);
  }
}

TEST(BoxOperator, KernelExample) {
  const auto op = box_af_operator(centered_cube());
  const std::vector<Rational> z{1, -1, 0, 0, 0, 0};
  for (const auto& r : op.matrix * z) EXPECT_EQ(r, 0);
}

TEST(BoxOperator, HigherDimensionalReferences) {
  Rng rng = sample_rng(56, 0);
  const std::vector<Box> refs{sampling::centered_box(rng, 4), sampling::box(rng, 4)};
  const auto op = box_af_operator(refs);
  const auto h = box_support_vector(refs[0]);
  EXPECT_EQ(op.matrix * h, h);
  EXPECT_TRUE(is_self_adjoint(op));
  const auto rep = spectrum_report(to_double(op), std::span<const double>(to_double(h)));
  EXPECT_EQ(rep.verdict, SpectralVerdict::hyperbolic);
  EXPECT_TRUE(rep.dichotomy);
  EXPECT_TRUE(rep.top_aligned);
}

TEST(BoxOperator, Preconditions) {
  EXPECT_THROW(box_af_operator(Box({1, 1, 1})), PreconditionError);
  EXPECT_THROW(box_af_operator(Box({1, 1})), InputError);
  const Rational h(-1, 2);
  EXPECT_THROW(box_af_operator(Box({1, 0, 1}, {h, 0, h})), PreconditionError);
}

TEST(Bochner, CubeOperator) {
  const Box cube = centered_cube();
  const auto op = to_double(box_af_operator(cube));
  const auto oracle_fn = [&](std::span<const double> x) { return box_quadratic(x, cube); };
  const auto rep = bochner_check(op, oracle_fn, 10000, 3);
  EXPECT_TRUE(rep.holds);
  EXPECT_GE(rep.min_residual, -1e-12);
  EXPECT_LE(rep.max_oracle_mismatch, 1e-12);
  EXPECT_LE(rep.max_expansion_mismatch, 1e-9);

  const auto h = to_double(box_support_vector(cube));
  const auto ah = op.matrix * h;
  EXPECT_NEAR(weighted_dot(ah, ah, op.weights) - weighted_dot(h, ah, op.weights), 0, 1e-14);
  const std::vector<double> kernel{1, -1, 0, 0, 0, 0};
  const auto ak = op.matrix * kernel;
  EXPECT_NEAR(weighted_dot(ak, ak, op.weights), 0, 1e-15);
  EXPECT_NEAR(weighted_dot(kernel, ak, op.weights), 0, 1e-15);
}

TEST(Bochner, DiagonalOperatorThree) {
  const auto op = to_double(diagonal_operator<Rational>(3, std::vector<Matrix<Rational>>{}));
  const auto oracle_fn = [](std::span<const double> x) {
    return mixed_discriminant<double>(std::vector<Matrix<double>>{
        Matrix<double>::diagonal(x), Matrix<double>::diagonal(x), Matrix<double>::identity(3)});
  };
  const auto rep = bochner_check(op, oracle_fn, 1000, 0);
  EXPECT_TRUE(rep.holds);
  EXPECT_LE(rep.max_oracle_mismatch, 1e-12);
}

TEST(Bochner, NegativeControl) {
  // An operator with eigenvalue 1/2 violates <Ax,Ax> >= <x,Ax>.
  const OperatorPair half{Matrix<double>::diagonal({1, 0.5}), {1, 1}};
  const auto rep = bochner_check(half, {}, 100, 0);
  EXPECT_FALSE(rep.holds);
  EXPECT_NEAR(rep.min_eigenbasis, -0.25, 1e-15);
}

TEST(SpectrumReport, ControlsAndDiagonal) {
  const auto id = spectrum_report(OperatorPair::uniform(Matrix<double>::identity(4)));
  EXPECT_EQ(id.inertia.positive, 4u);
  EXPECT_EQ(id.verdict, SpectralVerdict::not_hyperbolic);

  const auto d = spectrum_report(to_double(diagonal_operator<Rational>(3, std::vector<Matrix<Rational>>{})),
                                 std::span<const double>(std::vector<double>{1, 1, 1}));
  EXPECT_EQ(d.verdict, SpectralVerdict::hyperbolic);
  EXPECT_TRUE(d.simple_top);
  EXPECT_TRUE(d.top_aligned);
  for (double x : d.top_eigenvector) EXPECT_NEAR(x, 1.0, 1e-12);
}

TEST(VerifyAfViaSpectrum, SquareAndDiamond) {
  // Both polygons on the merged 8-direction fan; the diamond is the reference.
  const std::vector<PolygonFan> fans{fan_from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                                     fan_from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -1}})};
  const auto merged = common_refinement(fans);
  ASSERT_EQ(merged[0].size(), 8u);
  // The diamond has zero-length edges on the merged fan, so it cannot be the
  // simple reference there; use K + L, which has all eight edges.
  const std::vector<double> ones{1, 1};
  const PolygonFan sum = minkowski_combine(std::span<const PolygonFan>(merged), std::span<const double>(ones));
  const auto op = polygon_af_operator(sum);
  // <x, A y>_p is the mixed area, so the report's values are the mixed areas.
  const auto rep = verify_af_via_spectrum(merged[0].support(), merged[1].support(), op);
  EXPECT_EQ(rep.certificate, (Inertia{1, 2, 5}));
  EXPECT_EQ(inertia(polygon_form_matrix(merged[0].angles())), (Inertia{1, 2, 5}));
  EXPECT_TRUE(rep.direct.holds);
  EXPECT_NEAR(rep.direct.lhs.to_double(), 4, 1e-12);
  EXPECT_NEAR(rep.direct.rhs.to_double(), 2, 1e-12);
}

TEST(VerifyAfViaSpectrum, EqualityCases) {
  Rng rng = sample_rng(57, 0);
  const PolygonFan p = sampling::simple_fan(rng, 9);
  const auto op = polygon_af_operator(p);
  std::vector<double> x = p.support();
  for (auto& v : x) v *= 2.5;
  EXPECT_TRUE(verify_af_via_spectrum(x, p.support(), op).direct.equality);
  const auto t = polygon_translation_vectors(p.angles());
  std::vector<double> shifted = p.support();
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += 0.3 * t[0][i] - 1.1 * t[1][i];
  EXPECT_TRUE(verify_af_via_spectrum(shifted, p.support(), op).direct.equality);
}

TEST(VerifyAfViaSpectrum, RejectsNonHyperbolic) {
  const auto id = OperatorPair::uniform(Matrix<double>::identity(3));
  EXPECT_THROW(verify_af_via_spectrum(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}, id),
               PreconditionError);
}
