#include <gtest/gtest.h>

#include <random>

#include "heatflow/oracle.hpp"
#include "heatflow/parse.hpp"
#include "support.hpp"

using namespace heatflow;

TEST(Oracle, ClassicQuartic) {
  const auto r = brute_force_min(Polynomial{0, 56, -18, -8, 1});
  ASSERT_EQ(r.minimizers.size(), 1u);
  EXPECT_NEAR(r.minimizers[0], 7, 1e-12);
  EXPECT_NEAR(r.value, -833, 1e-9);
  ASSERT_EQ(r.critical_points.size(), 3u);
  const double xs[] = {-2, 1, 7}, vs[] = {-104, 31, -833};
  const CriticalKind ks[] = {CriticalKind::Min, CriticalKind::Max, CriticalKind::Min};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.critical_points[i].x, xs[i], 1e-12);
    EXPECT_NEAR(r.critical_points[i].value, vs[i], 1e-9);
    EXPECT_EQ(r.critical_points[i].kind, ks[i]);
  }
}

TEST(Oracle, SymmetricTie) {
  const auto r = brute_force_min(Polynomial{0, 12, -2, -4, 1});
  ASSERT_EQ(r.minimizers.size(), 2u);
  EXPECT_NEAR(r.minimizers[0], -1, 1e-12);
  EXPECT_NEAR(r.minimizers[1], 3, 1e-12);
  EXPECT_NEAR(r.value, -9, 1e-12);
}

TEST(Oracle, Square) {
  const auto r = brute_force_min(Polynomial{0, 0, 1});
  ASSERT_EQ(r.minimizers.size(), 1u);
  EXPECT_EQ(r.minimizers[0], 0.0);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Oracle, FlatCriticalPointIsNotExtremum) {
  // x^4 - 4x^3 has a critical inflection at 0 and its minimum at 3.
  const auto r = brute_force_min(Polynomial{0, 0, 0, -4, 1});
  EXPECT_NEAR(r.minimizers.at(0), 3, 1e-12);
  EXPECT_EQ(r.critical_points.at(0).kind, CriticalKind::InflectionCritical);
}

TEST(Oracle, DomainErrors) {
  EXPECT_THROW(brute_force_min(Polynomial{0, 1}), OddDegree);
  EXPECT_THROW(brute_force_min(Polynomial{0, 0, -1}), NegativeLeading);
}

TEST(Oracle, LowerBoundOnDenseGrid) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 100; ++i) {
    const auto p = testsupport::random_bounded_below(rng, 2 * (1 + i % 4), -2, 2);
    const auto r = brute_force_min(p);
    const double b = cauchy_bound(p) + 1;
    EXPECT_GE(testsupport::grid_min(p, -b, b, 20001).second, r.value - 1e-9 * coeff_scale(p));
    // Independent location: golden-section refinement of the grid minimum.
    const double x = testsupport::refined_min_location(p, -b, b);
    double best = 1e300;
    for (double m : r.minimizers) best = std::min(best, std::abs(m - x));
    if (r.minimizers.size() == 1) {
      EXPECT_LT(best, 1e-4) << format(p);
    }
  }
}

TEST(Oracle, PositiveScalingInvariance) {
  std::mt19937_64 rng(62);
  for (int i = 0; i < 50; ++i) {
    const auto p = testsupport::random_bounded_below(rng, 6, -2, 2);
    const auto r = brute_force_min(p);
    const auto s = brute_force_min(p * 3.5);
    ASSERT_EQ(r.minimizers.size(), s.minimizers.size());
    for (std::size_t k = 0; k < r.minimizers.size(); ++k) EXPECT_NEAR(r.minimizers[k], s.minimizers[k], 1e-9);
    EXPECT_NEAR(s.value, 3.5 * r.value, 1e-9 * (1 + std::abs(s.value)));
  }
}

TEST(VerifyMethod, KnownValues) {
  const auto ex10 = parse("x^4+0.2114x^3-2.6841x^2-0.1110x+1.2406");
  EXPECT_TRUE(verify_method(ex10, -1.2308).match);
  EXPECT_TRUE(verify_method(Polynomial{0, 0, 1}, 0.0).match);
  const auto m = verify_method(Polynomial{0, 56, -18, -8, 1}, -2.0);
  EXPECT_FALSE(m.match);
  EXPECT_NEAR(m.distance, 9.0, 1e-12);
}
