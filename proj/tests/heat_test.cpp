#include <gtest/gtest.h>

#include <random>

#include "heatflow/heat.hpp"
#include "heatflow/parse.hpp"
#include "support.hpp"

using namespace heatflow;
using testsupport::max_coeff_gap;

namespace {

double rel_gap(const Polynomial& a, const Polynomial& b) {
  return max_coeff_gap(a, b) / (1 + std::max(max_abs_coeff(a), max_abs_coeff(b)));
}

}  // namespace

TEST(Evolve, QuarticCoefficientsInT) {
  const double a = 0.7, b = -1.3, c = 2.1, d = 0.4;
  const auto e = evolve_symbolic(Polynomial{d, c, b, a, 1.0});
  for (double t : {0.0, 0.5, 2.0}) {
    const Polynomial s = e.at(t);
    EXPECT_NEAR(s[4], 1.0, 1e-15);
    EXPECT_NEAR(s[3], a, 1e-15);
    EXPECT_NEAR(s[2], b + 6 * t, 1e-14);
    EXPECT_NEAR(s[1], c + 3 * a * t, 1e-14);
    EXPECT_NEAR(s[0], d + b * t + 3 * t * t, 1e-14);
  }
}

TEST(Evolve, SexticCoefficientsInT) {
  const double b = -0.3726, c = 0.0574, d = 0.0306, e = -0.0084, f = 0.01;
  const auto ev = evolve_symbolic(Polynomial{f, e, d, c, b, 0.0, 1.0});
  for (double t : {0.0, 0.1, 1.5}) {
    const Polynomial s = ev.at(t);
    EXPECT_NEAR(s[4], b + 15 * t, 1e-13);
    EXPECT_NEAR(s[3], c, 1e-15);
    EXPECT_NEAR(s[2], d + 6 * b * t + 45 * t * t, 1e-12);
    EXPECT_NEAR(s[1], e + 3 * c * t, 1e-13);
    EXPECT_NEAR(s[0], f + d * t + 3 * b * t * t + 15 * t * t * t, 1e-12);
  }
}

TEST(Evolve, SquareGainsVariance) { EXPECT_EQ(evolve_at(Polynomial{0, 0, 1}, 2.5), (Polynomial{2.5, 0, 1})); }

TEST(Evolve, ClassicQuarticSymbolic) {
  const Polynomial p{0, 56, -18, -8, 1};
  for (double t : {0.0, 1.0, 3.5}) {
    const Polynomial want{3 * t * t - 18 * t, 56 - 24 * t, -18 + 6 * t, -8, 1};
    EXPECT_LT(max_coeff_gap(evolve_at(p, t), want), 1e-12);
  }
}

TEST(Evolve, IdentityAtZero) {
  const Polynomial p{0.3, -1, 2, 5, -7, 1, 2};
  EXPECT_EQ(evolve_at(p, 0.0), p);
}

TEST(Evolve, PureQuarticAtOne) { EXPECT_EQ(format(evolve_at(Polynomial{0, 0, 0, 0, 1}, 1.0)), "x^4+6x^2+3"); }

// Oracle: Gaussian filtering by Gauss-Hermite quadrature, which is exact for
// polynomials of degree below 48.
TEST(Evolve, MatchesGaussianQuadrature) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    const auto p = testsupport::random_poly(rng, 8, -2, 2);
    for (double t : {0.1, 0.7, 3.0})
      for (double x : {-1.5, 0.0, 0.8}) {
        const double ref = testsupport::gaussian_smooth(p, x, t);
        EXPECT_NEAR(evolve_at(p, t)(x), ref, 1e-10 * (1 + std::abs(ref)));
      }
  }
}

TEST(Evolve, Semigroup) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ut(0, 5);
  for (int i = 0; i < 200; ++i) {
    const auto p = testsupport::random_poly(rng, 1 + i % 8, -2, 2);
    const double s = ut(rng), t = ut(rng);
    EXPECT_LT(rel_gap(evolve_at(evolve_at(p, s), t), evolve_at(p, s + t)), 1e-12);
  }
}

TEST(Evolve, HeatEquationIdentity) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 50; ++i) {
    const auto p = testsupport::random_poly(rng, 1 + i % 8, -2, 2);
    const TPoly sym = evolve_symbolic(p).sym;
    const TPoly lhs = t_derivative(sym);
    const TPoly rhs = derivative(sym, 2) * 0.5;
    EXPECT_EQ(lhs.degree(), rhs.degree());
    for (int k = 0; k <= lhs.degree(); ++k) EXPECT_LT(max_coeff_gap(lhs.coefficient(k), rhs.coefficient(k)), 1e-12);
  }
}

TEST(Evolve, HeatEquationIdentityExactOnIntegerEvolutions) {
  // c_n = m_n n! makes every evolved coefficient an integer.
  std::mt19937_64 rng(45);
  std::uniform_int_distribution<int> m(-3, 3);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> c(static_cast<std::size_t>(2 + i % 8));
    double fact = 1;
    for (std::size_t n = 0; n < c.size(); ++n) {
      if (n > 0) fact *= static_cast<double>(n);
      c[n] = m(rng) * fact;
    }
    const TPoly sym = evolve_symbolic(Polynomial(c)).sym;
    const TPoly lhs = t_derivative(sym);
    const TPoly rhs = derivative(sym, 2) * 0.5;
    for (int k = 0; k <= std::max(lhs.degree(), rhs.degree()); ++k) EXPECT_EQ(max_coeff_gap(lhs.coefficient(k), rhs.coefficient(k)), 0.0);
  }
}

TEST(Evolve, DerivativeCommutes) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 200; ++i) {
    const auto p = testsupport::random_poly(rng, 1 + i % 8, -2, 2);
    const double t = 0.05 * i;
    EXPECT_LT(rel_gap(derivative(evolve_at(p, t)), evolve_at(derivative(p), t)), 1e-12);
  }
}

TEST(Evolve, TopTwoCoefficientsInvariant) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 50; ++i) {
    const auto p = testsupport::random_poly(rng, 2 + i % 7, -2, 2);
    const auto s = evolve_at(p, 2.7);
    EXPECT_EQ(s.degree(), p.degree());
    EXPECT_EQ(s.leading(), p.leading());
    EXPECT_EQ(s.coefficient(p.degree() - 1), p.coefficient(p.degree() - 1));
  }
}

TEST(Evolve, NegativeTimeIsInverse) {
  const Polynomial p{1, -2, 3, 0.5, 1};
  EXPECT_LT(max_coeff_gap(evolve_at(evolve_at(p, 1.3), -1.3), p), 1e-12);
}

TEST(Steklov, KnownValues) {
  EXPECT_LT(max_coeff_gap(steklov(Polynomial{0, 1}, 0.7), Polynomial{0, 1}), 1e-15);
  EXPECT_LT(max_coeff_gap(steklov(Polynomial{0, 0, 1}, 0.6), Polynomial{0.12, 0, 1}), 1e-15);
  EXPECT_LT(max_coeff_gap(steklov(Polynomial{0, 0, 0, 1}, 0.5), Polynomial{0, 0.25, 0, 1}), 1e-15);
  EXPECT_THROW(steklov(Polynomial{1, 1}, 0.0), NonpositiveWidth);
}

// Oracle: the window average from the antiderivative.
TEST(Steklov, MatchesWindowAverage) {
  std::mt19937_64 rng(46);
  for (int i = 0; i < 30; ++i) {
    const auto p = testsupport::random_poly(rng, 7, -2, 2);
    const Polynomial P = antiderivative(p);
    for (double t : {0.1, 1.0})
      for (double x : {-1.0, 0.3})
        EXPECT_NEAR(steklov(p, t)(x), (P(x + t) - P(x - t)) / (2 * t), 1e-10);
  }
}

// 2 mu_t + t mu_tt = t mu_xx, checked with the symbolic t-polynomial.
TEST(Steklov, RegularizationPde) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 30; ++i) {
    const auto p = testsupport::random_poly(rng, 8, -2, 2);
    const TPoly mu = steklov_symbolic(p);
    const TPoly mt = t_derivative(mu), mtt = t_derivative(mu, 2), mxx = derivative(mu, 2);
    for (double t : {0.2, 1.1})
      for (double x : {-1.3, 0.0, 0.9}) {
        const double lhs = 2 * eval_xt(mt, x, t) + t * eval_xt(mtt, x, t);
        const double rhs = t * eval_xt(mxx, x, t);
        EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + std::abs(rhs)));
      }
  }
}

TEST(Convexification, KnownValues) {
  EXPECT_EQ(convexification_time(Polynomial{0, 0, 0, 0, 1}).t_star, 0.0);
  EXPECT_NEAR(convexification_time(Polynomial{0, 12, -2, -4, 1}).t_star, 4.0 / 3.0, 1e-12);
  const auto ex5 = convexification_time(parse("x^6-0.3726x^4+0.0574x^3+0.0306x^2-0.0084x"));
  EXPECT_NEAR(ex5.t_star, 0.034887, 1e-4);
  EXPECT_EQ(ex5.certificate, ConvexityCertificate::Bisection);
  EXPECT_EQ(ex5.sturm_witness, 0);
}

TEST(Convexification, QuadraticIsZero) { EXPECT_EQ(convexification_time(Polynomial{1, 2, 3}).t_star, 0.0); }

TEST(Convexification, DomainErrors) {
  EXPECT_THROW(convexification_time(Polynomial{0, 0, 0, 1}), OddDegree);
  EXPECT_THROW(convexification_time(Polynomial{0, 0, -1}), NegativeLeading);
  EXPECT_THROW(convexification_time(Polynomial{}), ZeroPolynomial);
}

// Past t*, p_xx has no sign change; just before it, it does.
TEST(Convexification, CertificateOnRandomPolynomials) {
  std::mt19937_64 rng(48);
  for (int i = 0; i < 60; ++i) {
    const auto p = testsupport::random_bounded_below(rng, i % 2 ? 6 : 8, -2, 2);
    const double ts = convexification_time(p).t_star;
    const Polynomial after = derivative(evolve_at(p, ts * (1 + 1e-6) + 1e-9), 2);
    const double bound = cauchy_bound(after) + 1;
    const bool no_root = sturm_count(after, -bound, bound) == 0;
    EXPECT_TRUE(no_root || global_min_value(after).second >= -1e-12 * coeff_scale(p));
    if (ts > 1e-6) {
      EXPECT_LT(global_min_value(derivative(evolve_at(p, ts * (1 - 1e-4)), 2)).second, 0.0);
    }
  }
}

TEST(CriticalValueDelta, KnownValues) {
  EXPECT_EQ(critical_value_delta(Polynomial{0, 0, 1}, 0, 0), 1.0);
  EXPECT_EQ(critical_value_delta(Polynomial{0, 0, -1, 0, 1}, 0, 0), -1.0);
  EXPECT_EQ(critical_value_delta(Polynomial{0, 56, -18, -8, 1}, 7, 0), 108.0);
}
