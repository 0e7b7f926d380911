#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "heatflow/errors.hpp"
#include "heatflow/polynomial.hpp"

namespace heatflow {

struct Root {
  double value;
  int multiplicity;
};

/// Real roots in increasing order, each with its multiplicity.
struct RootSet {
  std::vector<Root> roots;

  std::size_t size() const { return roots.size(); }
  bool empty() const { return roots.empty(); }
  const Root& operator[](std::size_t i) const { return roots[i]; }
  auto begin() const { return roots.begin(); }
  auto end() const { return roots.end(); }

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(roots.size());
    for (const auto& r : roots) v.push_back(r.value);
    return v;
  }
  int total_multiplicity() const {
    int m = 0;
    for (const auto& r : roots) m += r.multiplicity;
    return m;
  }
};

inline constexpr double kDefaultRootTol = 1e-10;

namespace detail {

// Root of p in (lo, hi) where p(lo), p(hi) have strict opposite signs.
// Newton steps that leave the bracket fall back to bisection.
inline double bracketed_root(const Polynomial& p, const Polynomial& dp, double lo, double hi,
                             double flo) {
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = p(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double d = dp(x);
    double next = (d != 0.0) ? x - fx / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double tiny = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    if (std::abs(next - x) <= tiny || hi - lo <= tiny) return next;
    x = next;
  }
  return x;
}

// Distinct real roots via the derivative cascade: the critical points of p
// split the line into intervals on which p is monotone.  A critical point
// where p vanishes (to tol) is a multiple root whose multiplicity is one more
// than its multiplicity as a root of p'.
inline RootSet real_roots_cascade(const Polynomial& p, double tol) {
  RootSet out;
  const int n = p.degree();
  if (n <= 0) return out;
  if (n == 1) {
    out.roots.push_back({-p[0] / p[1], 1});
    return out;
  }
  const Polynomial dp = derivative(p);
  const RootSet crit = real_roots_cascade(dp, tol);

  double bound = cauchy_bound(p);
  for (const auto& c : crit) bound = std::max(bound, std::abs(c.value) + 1.0);

  struct Break {
    double x;
    double fx;
    bool is_root;
    int mult;
  };
  std::vector<Break> pts;
  pts.push_back({-bound, p(-bound), false, 0});
  for (const auto& c : crit) {
    const double fx = p(c.value);
    const bool root = std::abs(fx) <= tol * magnitude_at(p, c.value);
    pts.push_back({c.value, fx, root, c.multiplicity + 1});
  }
  pts.push_back({bound, p(bound), false, 0});

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Break& l = pts[i];
    const Break& r = pts[i + 1];
    if (i > 0 && l.is_root) out.roots.push_back({l.x, l.mult});
    if (l.is_root || r.is_root) continue;
    if (l.fx == 0.0 || r.fx == 0.0) continue;
    if ((l.fx < 0.0) != (r.fx < 0.0)) out.roots.push_back({bracketed_root(p, dp, l.x, r.x, l.fx), 1});
  }
  return out;
}

}  // namespace detail

/// All real roots of p with multiplicities.
///
/// Isolation uses the monotone intervals between consecutive critical points
/// (found recursively), then a bracketed Newton/bisection polish.  A root is a
/// repeated root when it is a critical point at which |p| <= tol * sum |c_k x^k|.
/// An exactly vanishing low-order block (p = x^m q) is reported as a root at 0.
inline RootSet real_roots(const Polynomial& p, double tol = kDefaultRootTol) {
  if (p.is_zero()) throw ZeroPolynomial();
  int zeros = 0;
  while (p[static_cast<std::size_t>(zeros)] == 0.0) ++zeros;
  if (zeros == 0) return detail::real_roots_cascade(p, tol);

  std::vector<double> rest(p.coeffs().begin() + zeros, p.coeffs().end());
  RootSet out = detail::real_roots_cascade(Polynomial(std::move(rest)), tol);
  auto it = std::lower_bound(out.roots.begin(), out.roots.end(), 0.0,
                             [](const Root& r, double v) { return r.value < v; });
  const double eps = 1e-14;
  if (it != out.roots.end() && std::abs(it->value) <= eps) {
    it->value = 0.0;
    it->multiplicity += zeros;
  } else {
    out.roots.insert(it, Root{0.0, zeros});
  }
  return out;
}

/// Sturm chain p, p', -rem(p, p'), ...  Each member after p is rescaled by a
/// positive factor to unit max coefficient, which leaves the sign pattern
/// intact.  Remainders whose coefficients are rounding noise relative to the
/// dividend are treated as zero.
inline std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  const auto unit = [](const Polynomial& q) { return q * (1.0 / max_abs_coeff(q)); };
  std::vector<Polynomial> seq{p};
  if (p.degree() > 0) seq.push_back(unit(derivative(p)));
  while (seq.back().degree() > 0) {
    const auto& a = seq[seq.size() - 2];
    const auto& b = seq.back();
    Polynomial r = divmod(a, b).second;
    r = chop(r, 0.0);
    const double noise = 1e-12 * std::max(max_abs_coeff(a), max_abs_coeff(b));
    if (max_abs_coeff(r) <= noise) break;
    seq.push_back(unit(-r));
  }
  if (seq.back().is_zero()) seq.pop_back();
  return seq;
}

namespace detail {
inline int sign_changes(const std::vector<Polynomial>& seq, double x) {
  int changes = 0;
  int last = 0;
  for (const auto& q : seq) {
    const double v = q(x);
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}
}  // namespace detail

/// Number of distinct real roots of p in (a, b).  Endpoints at which p
/// vanishes are nudged outward by a machine-scale step.
inline int sturm_count(const Polynomial& p, double a, double b) {
  if (p.is_zero()) throw ZeroPolynomial();
  if (p.degree() == 0) return 0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 64 && p(a) == 0.0; ++i) a -= 16.0 * eps * std::max(1.0, std::abs(a)) * (i + 1);
  for (int i = 0; i < 64 && p(b) == 0.0; ++i) b += 16.0 * eps * std::max(1.0, std::abs(b)) * (i + 1);
  const auto seq = sturm_sequence(p);
  return detail::sign_changes(seq, a) - detail::sign_changes(seq, b);
}

/// Global minimum of p over the real line (p of even degree, positive leading
/// coefficient) together with an argmin; constant polynomials report x = 0.
inline std::pair<double, double> global_min_value(const Polynomial& p) {
  if (p.degree() <= 0) return {0.0, p.coefficient(0)};
  const auto crit = real_roots(derivative(p));
  double best_x = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : crit) {
    const double v = p(r.value);
    if (v < best) {
      best = v;
      best_x = r.value;
    }
  }
  return {best_x, best};
}

}  // namespace heatflow
