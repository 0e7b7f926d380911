#include <gtest/gtest.h>

#include <random>

#include "heatflow/heat.hpp"
#include "heatflow/parse.hpp"
#include "heatflow/resultant.hpp"
#include "heatflow/sextic.hpp"
#include "support.hpp"

using namespace heatflow;

namespace {

constexpr double kB = -0.3726, kC = 0.0574, kD = 0.0306;
const char* const kTwoMergeSextic = "x^6-0.3726x^4+0.0574x^3+0.0306x^2-0.0084x";

std::vector<double> nonnegative_roots(const Polynomial& p) {
  std::vector<double> out;
  for (const auto& r : real_roots(p))
    if (r.value >= 0) out.push_back(r.value);
  return out;
}

}  // namespace

TEST(Depress, PositiveSextic) {
  const auto p = parse("x^6+0.6987x^5-1.0908x^4-0.4216x^3+0.2177x^2+0.1071x");
  const auto s = depress(p);
  EXPECT_NEAR(s.shift, -0.116450, 1e-6);
  // Expanding p(y + shift) directly.
  for (double y : {-1.0, 0.0, 0.5, 1.3}) EXPECT_NEAR(s.depressed()(y), p(y + s.shift), 1e-12);
  EXPECT_LT(testsupport::max_coeff_gap(s.original(), p), 1e-12);
}

TEST(Depress, AlreadyDepressed) {
  const auto s = depress(parse(kTwoMergeSextic));
  EXPECT_EQ(s.shift, 0.0);
  EXPECT_EQ(s.b, kB);
  EXPECT_EQ(s.c, kC);
  EXPECT_EQ(s.d, kD);
}

TEST(Depress, ShiftByOne) {
  const auto s = depress(Polynomial{0, 0, 0, 0, 0, 6, 1});
  EXPECT_EQ(s.shift, -1.0);
  EXPECT_EQ(s.depressed().coefficient(5), 0.0);
  // (y-1)^6 + 6(y-1)^5 = y^6 - 15y^4 + 40y^3 - 45y^2 + 24y - 5
  EXPECT_LT(testsupport::max_coeff_gap(s.depressed(), Polynomial{-5, 24, -45, 40, -15, 0, 1}), 1e-12);
}

TEST(Depress, WrongDegree) { EXPECT_THROW(depress(Polynomial{0, 0, 0, 0, 1}), WrongDegree); }

TEST(DeltaT, TwoMergeSexticRoots) {
  const auto roots = nonnegative_roots(delta_t(kB, kC, kD));
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], 0.002341, 1e-5);
  EXPECT_NEAR(roots[1], 0.034887, 1e-5);
}

TEST(DeltaT, ZeroCoefficients) {
  const Polynomial d = delta_t(0, 0, 0);
  EXPECT_EQ(d.degree(), 6);
  EXPECT_EQ(d.leading(), 27648.0);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(d.coefficient(k), 0.0);
}

TEST(DeltaT, ShiftedFormAgrees) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const double b = u(rng), c = u(rng), d = u(rng);
    const Polynomial tab = delta_t(b, c, d);
    for (double t : {-0.5, 0.0, 0.3, 1.7})
      EXPECT_NEAR(tab(t), delta_t_shifted_form(b, c, d, t), 1e-9 * (1 + magnitude_at(tab, t)));
  }
}

// The table and the generic elimination of x from (p_xx, p_xxx) are the same
// polynomial up to a constant factor.
TEST(DeltaT, AgreesWithResultant) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 500; ++i) {
    const double b = u(rng), c = u(rng), d = u(rng);
    const TPoly sym = evolve_symbolic(Polynomial{u(rng), u(rng), d, c, b, 0.0, 1.0}).sym;
    const Polynomial res = resultant_in_t(derivative(sym, 2), derivative(sym, 3));
    const Polynomial tab = delta_t(b, c, d);
    ASSERT_EQ(res.degree(), 6);
    const Polynomial scaled = res * (tab.leading() / res.leading());
    EXPECT_LT(testsupport::max_coeff_gap(scaled, tab), 1e-8 * (1 + max_abs_coeff(tab)));
    const auto rt = real_roots(tab).values(), rr = real_roots(res).values();
    ASSERT_EQ(rt.size(), rr.size());
    for (std::size_t k = 0; k < rt.size(); ++k) EXPECT_NEAR(rt[k], rr[k], 1e-8);
  }
}

TEST(XOfT, TwoMergeSextic) {
  const auto roots = nonnegative_roots(delta_t(kB, kC, kD));
  EXPECT_NEAR(x_of_t(kB, kC, kD, roots[0]), 0.23516, 1e-4);
  EXPECT_NEAR(x_of_t(kB, kC, kD, roots[1]), -0.078914, 1e-4);
  // At the rounded caption times as well.
  EXPECT_NEAR(x_of_t(kB, kC, kD, 0.002341), 0.23516, 1e-4);
  EXPECT_NEAR(x_of_t(kB, kC, kD, 0.034887), -0.078914, 1e-4);
}

TEST(XOfT, SymmetricGivesZero) { EXPECT_EQ(x_of_t(-1.0, 0.0, 0.1, 0.3), 0.0); }

TEST(XOfT, DegenerateDenominator) { EXPECT_THROW(x_of_t(0, 0, 0, 0), DegenerateDenominator); }

// Every merge abscissa is a genuine double root of p_xx(., t).
TEST(XOfT, MergePointsAreDoubleRoots) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-2, 2);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double b = u(rng), c = u(rng), d = u(rng);
    const TPoly sym = evolve_symbolic(Polynomial{0, 0, d, c, b, 0.0, 1.0}).sym;
    const TPoly pxx = derivative(sym, 2), pxxx = derivative(sym, 3);
    const double scale = 1 + std::max({std::abs(b), std::abs(c), std::abs(d), 1.0});
    for (const auto& r : real_roots(delta_t(b, c, d))) {
      double x;
      try {
        x = x_of_t(b, c, d, r.value);
      } catch (const DegenerateDenominator&) {
        continue;
      }
      // Only real double roots are merge points.
      const auto q = inflection_quartic(b, c, d, r.value);
      const auto cls = classify_repeated_depressed_quartic(q.beta, q.gamma, q.delta);
      if (cls == DoubleRootClass::TwoComplexDoubles || cls == DoubleRootClass::NoRepeatedRoot) continue;
      EXPECT_LE(std::abs(eval_xt(pxx, x, r.value)), 1e-7 * scale);
      EXPECT_LE(std::abs(eval_xt(pxxx, x, r.value)), 1e-7 * scale);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(InflectionQuartic, IsScaledPxx) {
  const double b = 0.4, c = -0.7, d = 1.1, t = 0.35;
  const Polynomial pxx = derivative(evolve_at(Polynomial{0, 0, d, c, b, 0, 1}, t), 2) * (1.0 / 30.0);
  const auto q = inflection_quartic(b, c, d, t);
  EXPECT_LT(testsupport::max_coeff_gap(pxx, Polynomial{q.delta, q.gamma, q.beta, 0, 1}), 1e-14);
}

TEST(MergeCase, TwoMergeSextic) {
  EXPECT_EQ(merge_case(kB, kC, kD, 0.002341), DoubleRootClass::DoublePlusTwoDistinctReal);
  EXPECT_EQ(merge_case(kB, kC, kD, 0.034887), DoubleRootClass::DoublePlusComplexPair);
  EXPECT_EQ(merge_case(0, 0, 0, 0), DoubleRootClass::QuadrupleRoot);
  EXPECT_THROW(merge_case(kB, kC, kD, 0.02), NotAMergeTime);
}

TEST(ClassifyDepressedQuartic, TwoMergeSexticInflectionQuartic) {
  const auto roots = nonnegative_roots(delta_t(kB, kC, kD));
  const auto q1 = inflection_quartic(kB, kC, kD, roots[0]);
  const auto q2 = inflection_quartic(kB, kC, kD, roots[1]);
  EXPECT_EQ(classify_depressed_quartic(q1.beta, q1.gamma, q1.delta), DoubleRootClass::DoublePlusTwoDistinctReal);
  EXPECT_EQ(classify_depressed_quartic(q2.beta, q2.gamma, q2.delta), DoubleRootClass::DoublePlusComplexPair);
}

TEST(AnalyzeSextic, TwoMergeSextic) {
  const auto a = analyze_sextic(parse(kTwoMergeSextic));
  EXPECT_LT(a.table_mismatch, 1e-10);
  ASSERT_EQ(a.merges.size(), 2u);
  EXPECT_FALSE(a.degenerate);
  EXPECT_NEAR(a.merges[0].t, 0.002341, 1e-5);
  EXPECT_NEAR(a.merges[0].x, 0.23516, 1e-4);
  EXPECT_EQ(a.merges[0].kind, DoubleRootClass::DoublePlusTwoDistinctReal);
  EXPECT_NEAR(a.merges[1].t, 0.034887, 1e-5);
  EXPECT_NEAR(a.merges[1].x, -0.078914, 1e-4);
  EXPECT_EQ(a.merges[1].kind, DoubleRootClass::DoublePlusComplexPair);
}

TEST(AnalyzeSextic, GenericHasAtMostTwoMergeTimes) {
  std::mt19937_64 rng(74);
  for (int i = 0; i < 200; ++i) {
    const auto p = testsupport::random_bounded_below(rng, 6, -2, 2);
    const auto a = analyze_sextic(p);
    EXPECT_LE(a.merges.size(), 2u);
    EXPECT_FALSE(a.degenerate);
    EXPECT_LT(a.table_mismatch, 1e-8);
  }
}

// Heat evolution commutes with translation in x.
TEST(AnalyzeSextic, DepressionCommutesWithEvolution) {
  std::mt19937_64 rng(75);
  for (int i = 0; i < 50; ++i) {
    const Polynomial p = make_monic(testsupport::random_bounded_below(rng, 6, -2, 2));
    const auto s = depress(p);
    for (double t : {0.0, 0.2, 1.4}) {
      const Polynomial a = taylor_shift(evolve_at(p, t), s.shift);
      const Polynomial b = evolve_at(s.depressed(), t);
      EXPECT_LT(testsupport::max_coeff_gap(a, b), 1e-12 * (1 + max_abs_coeff(a)));
    }
  }
}
