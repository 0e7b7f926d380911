#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "heatflow/errors.hpp"
#include "heatflow/polynomial.hpp"
#include "heatflow/roots.hpp"

namespace heatflow {

/// p(x, t): the Gaussian-filtered polynomial, with x-coefficients that are
/// polynomials in the scale t.
struct EvolvedPolynomial {
  Polynomial base;
  TPoly sym;

  Polynomial at(double t) const { return at_t(sym, t); }
  double operator()(double x, double t) const { return eval_xt(sym, x, t); }
};

/// Closed-form heat evolution sum_k t^k / (2^k k!) d^{2k}p/dx^{2k}.
inline EvolvedPolynomial evolve_symbolic(const Polynomial& p) {
  const int n = p.degree();
  std::vector<Polynomial> coeffs(static_cast<std::size_t>(std::max(n + 1, 0)));
  Polynomial d = p;
  double denom = 1.0;  // 2^k k!, an exact integer; dividing keeps exact quotients exact
  for (int k = 0; !d.is_zero(); ++k) {
    for (int j = 0; j <= d.degree(); ++j) {
      auto& slot = coeffs[static_cast<std::size_t>(j)];
      slot = slot + Polynomial::monomial(k, d[static_cast<std::size_t>(j)] / denom);
    }
    d = derivative(d, 2);
    denom *= 2.0 * (k + 1);
  }
  return {p, TPoly(std::move(coeffs))};
}

/// p(., t).  Negative t is accepted: the closed form is a polynomial in t and
/// gives the backward (anti-diffused) polynomial.
inline Polynomial evolve_at(const Polynomial& p, double t) {
  Polynomial out;
  Polynomial d = p;
  double weight = 1.0;
  double tk = 1.0;
  for (int k = 0; !d.is_zero(); ++k) {
    out += d * (weight * tk);
    d = derivative(d, 2);
    weight /= 2.0 * (k + 1);
    tk *= t;
  }
  return out;
}

/// Moving-average (boxcar) smoothing over [x - t, x + t] as a polynomial in x
/// and t: sum_j p^{(2j)}(x) t^{2j} / (2j+1)!.
inline TPoly steklov_symbolic(const Polynomial& p) {
  std::vector<Polynomial> coeffs(static_cast<std::size_t>(std::max(p.degree() + 1, 0)));
  Polynomial d = p;
  double weight = 1.0;  // 1 / (2j+1)!
  for (int j = 0; !d.is_zero(); ++j) {
    for (int i = 0; i <= d.degree(); ++i) {
      auto& slot = coeffs[static_cast<std::size_t>(i)];
      slot = slot + Polynomial::monomial(2 * j, weight * d[static_cast<std::size_t>(i)]);
    }
    d = derivative(d, 2);
    weight /= static_cast<double>((2 * j + 2) * (2 * j + 3));
  }
  return TPoly(std::move(coeffs));
}

/// (1 / 2t) * integral of p over [x - t, x + t].
inline Polynomial steklov(const Polynomial& p, double t) {
  if (!(t > 0.0)) throw NonpositiveWidth();
  return at_t(steklov_symbolic(p), t);
}

enum class ConvexityCertificate { ClosedForm, Bisection };

struct ConvexificationResult {
  double t_star = 0.0;
  ConvexityCertificate certificate = ConvexityCertificate::ClosedForm;
  // Bisection only: the upper end of the final bracket and the Sturm count
  // of p_xx there (0 witnesses convexity).
  double certified_at = 0.0;
  int sturm_witness = 0;
};

inline void require_even_positive(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  if (p.degree() % 2 != 0) throw OddDegree(p.degree());
  if (!(p.leading() > 0.0)) throw NegativeLeading();
}

/// min_x of p_xx(x, t) >= 0.  Evaluated at the critical points of p_xx.
inline bool is_convex_slice(const Polynomial& slice) {
  const Polynomial dd = derivative(slice, 2);
  if (dd.degree() <= 0) return dd.coefficient(0) >= 0.0;
  return global_min_value(dd).second >= 0.0;
}

/// Smallest t >= 0 beyond which p(., t) is convex.
///
/// Quartics use max(0, a^2/16 - b/6) on the monic normalization.  Other degrees
/// bisect on t, which is valid because min_x p_xx(x, t) is nondecreasing in t.
inline ConvexificationResult convexification_time(const Polynomial& p, double t_tol = 1e-10) {
  require_even_positive(p);
  ConvexificationResult res;
  if (p.degree() == 2) return res;
  if (p.degree() == 4) {
    const double a = p[3] / p[4];
    const double b = p[2] / p[4];
    res.t_star = std::max(0.0, a * a / 16.0 - b / 6.0);
    return res;
  }
  res.certificate = ConvexityCertificate::Bisection;
  const Polynomial q = make_monic(p);
  const auto sym = evolve_symbolic(q).sym;
  const TPoly sym_xx = derivative(sym, 2);
  auto convex_at = [&](double t) { return is_convex_slice(at_t(sym, t)); };
  if (convex_at(0.0)) {
    res.t_star = 0.0;
    res.certified_at = 0.0;
    res.sturm_witness = 0;
    return res;
  }
  const double m = std::max(1.0, max_abs_coeff(q));
  double lo = 0.0;
  double hi = 1.0 + m * m;
  while (!convex_at(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > t_tol) {
    const double mid = 0.5 * (lo + hi);
    if (convex_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  res.t_star = hi;
  res.certified_at = hi * (1.0 + 1e-6) + 1e-12;
  const Polynomial pxx = at_t(sym_xx, res.certified_at);
  const double bound = cauchy_bound(pxx);
  res.sturm_witness = sturm_count(pxx, -bound, bound);
  return res;
}

/// d/dt of p(x(t), t) along a critical trajectory: half the curvature.
inline double critical_value_delta(const Polynomial& p, double x, double t) {
  return 0.5 * derivative(evolve_at(p, t), 2)(x);
}

}  // namespace heatflow
