#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "heatflow/cubic.hpp"
#include "heatflow/errors.hpp"
#include "heatflow/flow.hpp"
#include "heatflow/polynomial.hpp"

namespace heatflow {

// Closed-form analysis of monic quartics x^4 + a x^3 + b x^2 + c x + d.

enum class MinimizerSide { Left, Right, Both, SingleCritical };

inline std::string_view to_string(MinimizerSide s) {
  switch (s) {
    case MinimizerSide::Left: return "Left";
    case MinimizerSide::Right: return "Right";
    case MinimizerSide::Both: return "Both";
    case MinimizerSide::SingleCritical: return "SingleCritical";
  }
  return "?";
}

struct QuarticCoeffs {
  double a = 0, b = 0, c = 0, d = 0;

  Polynomial poly() const { return Polynomial{d, c, b, a, 1.0}; }
  double scale() const { return 1.0 + std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), 1.0}); }

  /// Normalize a degree-4 polynomial by its leading coefficient.
  static QuarticCoeffs from(const Polynomial& p) {
    if (p.degree() != 4) throw WrongDegree(4, p.degree());
    const double l = p.leading();
    return {p[3] / l, p[2] / l, p[1] / l, p[0] / l};
  }
};

struct QuarticReport {
  QuarticCoeffs coeffs;
  double t_star = 0;   // convexification time
  double t_u = 0;      // merge time of the minimum/maximum pair
  double merge_x = 0;  // abscissa of that merge
  double x_init = 0;   // surviving critical point at t_u
  std::optional<Interval> confinement;
  MinimizerSide side = MinimizerSide::SingleCritical;
  std::vector<double> critical_points;
};

/// a^3 - 4ab + 8c: vanishes exactly when -a/4 is a critical point.
inline double quartic_skew(const QuarticCoeffs& q) { return q.a * q.a * q.a - 4.0 * q.a * q.b + 8.0 * q.c; }

/// Critical points: real roots of p'(x)/4 = x^3 + (3a/4)x^2 + (b/2)x + c/4.
inline RootSet quartic_critical_points(const QuarticCoeffs& q) {
  return solve_cubic(0.75 * q.a, 0.5 * q.b, 0.25 * q.c).roots;
}

namespace detail {
inline bool three_distinct(const RootSet& r) { return r.size() == 3; }
}  // namespace detail

/// Which local minimum is global.  With critical points x1 < x2 < x3 the right
/// one x3 is global iff x2 < -a/4; Both when x2 = -a/4 to tol_side.
inline MinimizerSide global_min_side(const QuarticCoeffs& q) {
  const auto crit = quartic_critical_points(q);
  if (!detail::three_distinct(crit)) return MinimizerSide::SingleCritical;
  const double center = -q.a / 4.0;
  const Polynomial dp = derivative(q.poly());
  const double tol_side = 1e-9 * q.scale();
  if (std::abs(dp(center)) <= tol_side) return MinimizerSide::Both;
  return crit[1].value < center ? MinimizerSide::Right : MinimizerSide::Left;
}

inline QuarticReport analyze(const QuarticCoeffs& q) {
  QuarticReport r;
  r.coeffs = q;
  const double skew = quartic_skew(q);
  r.t_star = q.a * q.a / 16.0 - q.b / 6.0;
  r.t_u = r.t_star - real_pow_two_thirds(skew) / 16.0;
  const double cr = real_cbrt(skew / 64.0);
  r.merge_x = cr - q.a / 4.0;
  r.x_init = -q.a / 4.0 - 2.0 * cr;
  if (r.t_star >= 0.0) {
    const double w = std::sqrt(3.0 * r.t_star);
    r.confinement = Interval{-q.a / 4.0 - w, -q.a / 4.0 + w};
  }
  r.side = global_min_side(q);
  r.critical_points = quartic_critical_points(q).values();
  return r;
}

/// Gradient descent x <- x - step p'(x) from the fixed start -a/4.  When -a/4
/// is itself critical (symmetric case) the two minimizers are returned as the
/// roots of the quadratic p'(x) / (4 (x + a/4)).
inline std::vector<double> fixed_start_descent(const QuarticCoeffs& q, double step = 0.0, long max_iter = 1000000) {
  const Polynomial p = q.poly();
  const Polynomial dp = derivative(p);
  const Polynomial d2p = derivative(p, 2);
  if (step <= 0.0) step = 1e-3 / q.scale();
  const double center = -q.a / 4.0;
  const double tol_side = 1e-9 * q.scale();
  if (std::abs(dp(center)) <= tol_side && global_min_side(q) == MinimizerSide::Both) {
    const auto [quad, rem] = divmod(dp, Polynomial{q.a / 4.0, 1.0});
    const auto roots = real_roots(quad * 0.25);
    return roots.values();
  }
  double x = center;
  const double gtol = 1e-13 * q.scale() * q.scale();
  for (long it = 0; it < max_iter; ++it) {
    const double g = dp(x);
    // Hand over to Newton once inside the convex basin of a minimum.
    if (d2p(x) > 0.0 && std::abs(g) < 1e-3 * q.scale()) {
      const double xn = polish_critical(p, x);
      if (std::abs(xn - x) < 1e-2) return {xn};
    }
    if (std::abs(g) <= gtol) return {polish_critical(p, x)};
    x -= step * g;
    if (!std::isfinite(x)) break;
  }
  throw NonConvergence("fixed-start descent did not converge; reduce the step");
}

/// Explicit Euler on the critical-point flow from (x_init, t_u) down to t = 0,
/// then Newton on p'.
inline double backward_iteration(const QuarticCoeffs& q, double dt = 0.0) {
  const auto rep = analyze(q);
  const Polynomial p = q.poly();
  if (rep.t_u <= 0.0) {
    // A single critical point: return it directly.
    const auto crit = quartic_critical_points(q);
    if (crit.empty()) throw NotApplicable("quartic has no real critical point");
    return polish_critical(p, crit[0].value);
  }
  if (rep.side == MinimizerSide::Both)
    throw NotApplicable("-a/4 is a critical point; the two minimizers solve a quadratic");
  if (dt <= 0.0) dt = rep.t_u / 1e5;
  const long n = static_cast<long>(std::ceil(rep.t_u / dt));
  const double h = rep.t_u / static_cast<double>(n);
  double x = rep.x_init;
  double t = rep.t_u;
  for (long i = 0; i < n; ++i) {
    const double slope = -(12.0 * x + 3.0 * q.a) / (12.0 * x * x + 6.0 * q.a * x + 2.0 * q.b + 12.0 * t);
    x -= h * slope;
    t -= h;
  }
  return polish_critical(p, x);
}

struct CubicCoeffs {
  double a, b, c;
};

/// The monic quartic x^4 + a x^3 + b x^2 + c x whose critical points are x1, x2, x3.
inline CubicCoeffs coeffs_from_critical_points(double x1, double x2, double x3) {
  const auto s = power_sums_check(x1, x2, x3);
  return {-4.0 / 3.0 * s.e1, 2.0 * s.e2, -4.0 * s.e3};
}

/// p(x3) - p(x1) for that quartic.
inline double value_gap(double x1, double x2, double x3) {
  const double w = x3 - x1;
  return -w * w * w * (x1 + x3 - 2.0 * x2) / 3.0;
}

struct CriticalTimes {
  double t_star;
  double t_u;
};

/// t* and t_u expressed through the critical points.
inline CriticalTimes quartic_t_times_from_roots(double x1, double x2, double x3) {
  const auto s = power_sums_check(x1, x2, x3);
  const double t_star = (s.e1 / 3.0) * (s.e1 / 3.0) - s.e2 / 3.0;
  const double prod = (2 * x1 - x2 - x3) * (2 * x2 - x3 - x1) * (2 * x3 - x1 - x2);
  return {t_star, t_star - real_pow_two_thirds(32.0 / 27.0 * prod) / 16.0};
}

/// Time-varying cubic discriminant of p_x(., t) / 4; strictly increasing in t
/// with its unique zero at t_u.
inline double quartic_fp1_discriminant(const QuarticCoeffs& q, double t) {
  const double g = quartic_skew(q) / 64.0;
  const double f = (-3.0 * q.a * q.a + 8.0 * q.b) / 48.0 + t;
  return g * g + f * f * f;
}

/// Vertices (x_i(t), p(x_i(t), t)) of the critical-point triangles for t in
/// [0, t_u), sampled n times.
struct TriangleVertex {
  double t;
  double x;
  double value;
};

inline std::vector<TriangleVertex> triangle_series(const QuarticCoeffs& q, int n) {
  std::vector<TriangleVertex> out;
  const auto rep = analyze(q);
  if (rep.t_u <= 0.0 || n <= 0) return out;
  const Polynomial p = q.poly();
  for (int i = 0; i < n; ++i) {
    const double t = rep.t_u * i / n;
    const Polynomial s = evolve_at(p, t);
    const Polynomial ds = derivative(s) * 0.25;
    for (const auto& r : solve_cubic(ds[2], ds[1], ds[0]).roots) out.push_back({t, r.value, s(r.value)});
  }
  return out;
}

}  // namespace heatflow
