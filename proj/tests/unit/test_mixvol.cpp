#include <gtest/gtest.h>

#include <numbers>

#include "afv/mixvol.hpp"
#include "afv/sampling.hpp"
#include "support/oracles.hpp"

using namespace afv;

namespace {

const double pi = std::numbers::pi;
const std::vector<double> square_angles{0, pi / 2, pi, 3 * pi / 2};

PolygonFan unit_square() { return fan_from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
PolygonFan diamond() { return fan_from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }

std::vector<Zonotope> as_zonotopes(const std::vector<ConvexBody>& bs) {
  std::vector<Zonotope> out;
  for (const auto& b : bs)
    out.push_back(std::holds_alternative<Box>(b) ? Zonotope::from_box(std::get<Box>(b)) : std::get<Zonotope>(b));
  return out;
}

}  // namespace

TEST(Permanent, SmallAndRyserAgree) {
  Matrix<Rational> a(9, 9);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) a(i, j) = 1;
  // perm(J_9) = 9!
  EXPECT_EQ(permanent(a), factorial(9));
  Matrix<Rational> b{{1, 2}, {3, 4}};
  EXPECT_EQ(permanent(b), 10);
}

TEST(MixedVolumeBoxes, SpecExample) {
  const std::vector<Box> bs{Box({1, 2}), Box({3, 1})};
  EXPECT_EQ(mixed_volume_boxes(bs), Rational(7, 2));
  // Inclusion-exclusion by hand: Vol(K+L) - Vol K - Vol L = 12 - 2 - 3 = 7 = 2V.
  EXPECT_EQ(Rational(12 - 2 - 3) / 2, Rational(7, 2));
}

TEST(MixedVolumeBoxes, IdenticalBoxesGiveVolume) {
  const Box b({Rational(1, 2), 3, 5});
  const std::vector<Box> bs(3, b);
  EXPECT_EQ(mixed_volume_boxes(bs), volume(b));
  const std::vector<Box> cubes(3, Box({1, 1, 1}));
  EXPECT_EQ(mixed_volume_boxes(cubes), 1);
}

TEST(MixedVolumeBoxes, CountMismatch) {
  const std::vector<Box> bs{Box({1, 2})};
  EXPECT_THROW(mixed_volume_boxes(bs), InputError);
}

TEST(MixedVolumeZonotopes, Examples) {
  const std::vector<Zonotope> segs{Zonotope(2, {{1, 0}}), Zonotope(2, {{0, 1}})};
  EXPECT_EQ(mixed_volume_zonotopes(segs), Rational(1, 2));
  const std::vector<Zonotope> sq(2, Zonotope(2, {{1, 0}, {0, 1}}));
  EXPECT_EQ(mixed_volume_zonotopes(sq), 1);
  const std::vector<Zonotope> z{Zonotope(2, {{1, 0}, {1, 1}}), Zonotope(2, {{0, 1}})};
  EXPECT_EQ(mixed_volume_zonotopes(z), 1);
  EXPECT_EQ(oracle::polarized_mixed_volume(z), 1);
}

TEST(MixedVolumeZonotopes, DimensionMismatch) {
  const std::vector<Zonotope> z{Zonotope(2, {{1, 0}}), Zonotope(3, {{0, 1, 0}})};
  EXPECT_THROW(mixed_volume_zonotopes(z), InputError);
}

TEST(MixedArea, Examples) {
  const PolygonFan sq(square_angles, {0.5, 0.5, 0.5, 0.5});
  EXPECT_NEAR(mixed_area(sq.support(), sq.support(), sq.angles()), 1.0, 1e-15);
  const std::vector<double> point{1, 0, -1, 0};
  EXPECT_NEAR(mixed_area(std::vector<double>{3, 1, 4, 1}, point, square_angles), 0.0, 1e-15);
  EXPECT_THROW(mixed_area(std::vector<double>{1, 1}, point, square_angles), InputError);
}

TEST(MixedArea, SquareAndDiamondOnMergedFan) {
  const std::vector<ConvexBody> kl{unit_square(), diamond()};
  const Real v = mixed_volume(kl).value;
  EXPECT_FALSE(v.exact());
  EXPECT_NEAR(v.to_double(), 2.0, 1e-12);
  EXPECT_NEAR(mixed_volume_oracle(kl).to_double(), 2.0, 1e-12);
  // Independent route: Vol(K+L) = 7 from vertex sums.
  const std::vector<oracle::Point> k{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, l{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  EXPECT_NEAR(oracle::shoelace(oracle::hull(oracle::minkowski_points(k, l))), 7.0, 1e-12);
  EXPECT_NEAR(oracle::mixed_area_from_vertices(k, l), 2.0, 1e-12);
}

TEST(MixedArea, SymmetricAndMatchesVertexOracle) {
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng = sample_rng(21, i);
    const auto angles = sampling::fan_angles(rng, sampling::index(rng, 3, 16));
    const PolygonFan k = sampling::simple_fan(rng, angles), l = sampling::simple_fan(rng, angles);
    const double kl = mixed_area(k.support(), l.support(), angles);
    const double lk = mixed_area(l.support(), k.support(), angles);
    EXPECT_NEAR(kl, lk, 1e-10 * std::abs(kl));
    const double o = oracle::mixed_area_from_vertices(oracle::fan_vertices(angles, k.support()),
                                                      oracle::fan_vertices(angles, l.support()));
    EXPECT_NEAR(kl, o, 1e-9 * std::abs(o));
  }
}

TEST(Oracle, ExamplesAndPointSlot) {
  const std::vector<ConvexBody> bs{Box({1, 2}), Box({3, 1})};
  EXPECT_EQ(mixed_volume_oracle(bs).rational(), Rational(7, 2));
  const Box b({1, 2, 3});
  const std::vector<ConvexBody> same(3, b);
  EXPECT_EQ(mixed_volume_oracle(same).rational(), 6);
  const std::vector<ConvexBody> with_point{Box({1, 2, 3}), Box({0, 0, 0}), Box({2, 2, 2})};
  EXPECT_EQ(mixed_volume_oracle(with_point).rational(), 0);
  EXPECT_EQ(mixed_volume(with_point).value.rational(), 0);
}

TEST(Oracle, Errors) {
  const std::vector<ConvexBody> mixed{Box({1, 1}), unit_square()};
  EXPECT_THROW(mixed_volume_oracle(mixed), InputError);
  const std::vector<ConvexBody> wrong_count{Box({1, 1, 1}), Box({1, 1, 1})};
  EXPECT_THROW(mixed_volume_oracle(wrong_count), InputError);
  std::vector<ConvexBody> big(21, Box(std::vector<Rational>(21, Rational(1))));
  EXPECT_THROW(mixed_volume_oracle(big), InputError);
}

TEST(EngineAgreement, RandomBoxesAndZonotopes) {
  for (std::size_t i = 0; i < 150; ++i) {
    Rng rng = sample_rng(22, i);
    const std::size_t n = sampling::index(rng, 1, 4);
    std::vector<ConvexBody> bs;
    for (std::size_t k = 0; k < n; ++k)
      bs.push_back(i % 2 ? ConvexBody(sampling::box(rng, n)) : ConvexBody(sampling::zonotope(rng, n)));
    const Rational engine = mixed_volume(bs).value.rational();
    EXPECT_EQ(engine, mixed_volume_oracle(bs).rational());
    EXPECT_EQ(engine, oracle::polarized_mixed_volume(as_zonotopes(bs)));
  }
}

TEST(Properties, SymmetryMultilinearityTranslationNonnegativity) {
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = sample_rng(23, i);
    const std::size_t n = sampling::index(rng, 2, 4);
    std::vector<ConvexBody> bs;
    for (std::size_t k = 0; k < n; ++k) bs.push_back(sampling::zonotope(rng, n, 4));
    const Rational v = mixed_volume(bs).value.rational();
    EXPECT_GE(v, 0);

    auto perm = bs;
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(mixed_volume(perm).value.rational(), v);

    const ConvexBody other = sampling::zonotope(rng, n, 4);
    const Rational a = sampling::positive_rational(rng), b = sampling::positive_rational(rng);
    const std::vector<ConvexBody> pair{bs[0], other};
    const std::vector<Rational> ab{a, b};
    auto combined = bs;
    combined[0] = minkowski_combine(std::span<const ConvexBody>(pair), std::span<const Rational>(ab));
    auto with_other = bs;
    with_other[0] = other;
    EXPECT_EQ(mixed_volume(combined).value.rational(), a * v + b * mixed_volume(with_other).value.rational());

    std::vector<Rational> t;
    for (std::size_t k = 0; k < n; ++k) t.push_back(sampling::rational(rng));
    auto moved = bs;
    moved[1] = std::get<Zonotope>(bs[1]).translated(t);
    EXPECT_EQ(mixed_volume(moved).value.rational(), v);
  }
}

TEST(Properties, BoxTranslationInvariance) {
  Rng rng = sample_rng(24, 0);
  std::vector<ConvexBody> bs;
  for (std::size_t k = 0; k < 3; ++k) bs.push_back(sampling::box(rng, 3));
  const Rational v = mixed_volume(bs).value.rational();
  const std::vector<Rational> t{5, Rational(-7, 3), 1};
  bs[2] = std::get<Box>(bs[2]).translated(t);
  EXPECT_EQ(mixed_volume(bs).value.rational(), v);
}

TEST(VerifyAf, SquareDiamond) {
  const auto rep = verify_af(unit_square(), diamond(), {});
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.equality);
  EXPECT_NEAR(rep.lhs.to_double(), 4.0, 1e-12);
  EXPECT_NEAR(rep.rhs.to_double(), 2.0, 1e-12);
}

TEST(VerifyAf, HomothetGivesEquality) {
  const Box k({1, 2, Rational(1, 3)});
  const Box l({3, 6, 1});
  const std::vector<ConvexBody> refs{Box({2, 1, 1})};
  const auto rep = verify_af(k, l, refs);
  EXPECT_TRUE(rep.exact());
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.equality);
  EXPECT_EQ(rep.gap.rational(), 0);
  // With refs equal to K as well: both sides are 9 Vol(K)^2.
  const std::vector<ConvexBody> self{k};
  const auto eq = verify_af(k, l, self);
  EXPECT_EQ(eq.lhs.rational(), 9 * volume(k) * volume(k));
}

TEST(VerifyAf, RandomBoxesR4) {
  for (std::size_t i = 0; i < 300; ++i) {
    Rng rng = sample_rng(25, i);
    const std::vector<ConvexBody> refs{sampling::box(rng, 4), sampling::box(rng, 4)};
    const auto rep = verify_af(sampling::box(rng, 4), sampling::box(rng, 4), refs);
    EXPECT_TRUE(rep.exact());
    EXPECT_TRUE(rep.holds) << rep.lhs.str() << " < " << rep.rhs.str();
  }
}

TEST(VerifyAf, Errors) {
  EXPECT_THROW(verify_af(Box({1, 1, 1}), Box({1, 1, 1}), {}), InputError);
  EXPECT_THROW(verify_af(Box({1}), Box({1}), {}), InputError);
}
