#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "heatflow/cubic.hpp"
#include "heatflow/errors.hpp"
#include "heatflow/heat.hpp"
#include "heatflow/resultant.hpp"
#include "heatflow/roots.hpp"

namespace heatflow {

/// Monic sextic written as x^6 + b x^4 + c x^3 + d x^2 + e x + f in the
/// variable y = x - shift.
struct SexticForm {
  double b = 0, c = 0, d = 0, e = 0, f = 0;
  double shift = 0;

  Polynomial depressed() const { return Polynomial{f, e, d, c, b, 0.0, 1.0}; }
  /// The monic polynomial in the original variable.
  Polynomial original() const { return taylor_shift(depressed(), -shift); }
};

/// Remove the x^5 term by the substitution x = y + shift, shift = -c5 / 6.
/// Non-monic input is normalized first.
inline SexticForm depress(const Polynomial& p) {
  if (p.degree() != 6) throw WrongDegree(6, p.degree());
  const Polynomial q = make_monic(p);
  SexticForm s;
  s.shift = -q[5] / 6.0;
  const Polynomial dq = taylor_shift(q, s.shift);
  s.b = dq.coefficient(4);
  s.c = dq.coefficient(3);
  s.d = dq.coefficient(2);
  s.e = dq.coefficient(1);
  s.f = dq.coefficient(0);
  return s;
}

/// Discriminant, in t, of the inflection quartic p_xx / 30 of the heat-evolved
/// depressed sextic (hard-coded coefficient table, highest power c0 = 27648).
inline Polynomial delta_t(double b, double c, double d) {
  const double b2 = b * b, b3 = b2 * b, b4 = b2 * b2;
  const double c2 = c * c, c4 = c2 * c2;
  const double d2 = d * d, d3 = d2 * d;
  const double k0 = 27648.0;
  const double k1 = 55296.0 * b / 5.0;
  const double k2 = 9216.0 * b2 / 5.0;
  const double k3 = (4096.0 * b3 + 1728.0 * c2) / 25.0;
  const double k4 = 4864.0 * b4 / 625.0 + (512.0 * d * b2 + 1728.0 * b * c2) / 125.0 - 256.0 * d2 / 25.0;
  const double k5 = 32.0 * (b2 + 5.0 * d) * (48.0 * b3 - 80.0 * d * b + 135.0 * c2) / 9375.0;
  const double k6 = 256.0 * b4 * d / 9375.0 - 32.0 * b3 * c2 / 3125.0 - 512.0 * b2 * d2 / 5625.0 +
                    96.0 * b * c2 * d / 625.0 - 27.0 * c4 / 625.0 + 256.0 * d3 / 3375.0;
  return Polynomial{k6, k5, k4, k3, k2, k1, k0};
}

/// The same discriminant written in the shifted time t' = t + b/15 with
/// h = b^2 - 5d; used as an algebraic cross-check of the table.
inline double delta_t_shifted_form(double b, double c, double d, double t) {
  const double tp = t + b / 15.0;
  const double h = b * b - 5.0 * d;
  const double c2 = c * c;
  return 27648.0 * std::pow(tp, 6) + 1728.0 * c2 / 25.0 * tp * tp * tp - 256.0 / 625.0 * h * h * tp * tp -
         288.0 / 625.0 * c2 * h * tp - 256.0 * h * h * h / (75.0 * 75.0 * 75.0) - 27.0 * c2 * c2 / 625.0;
}

/// Abscissa of the double root of p_xx(., t) at a merge time t.
inline double x_of_t(double b, double c, double d, double t) {
  const double tp = t + b / 15.0;
  const double h = b * b - 5.0 * d;
  const double num = -c * (1800.0 * tp * tp - 4.0 * h);
  const double t1 = 36000.0 * tp * tp * tp;
  const double t2 = 80.0 * h * tp;
  const double t3 = 45.0 * c * c;
  const double den = t1 + t2 + t3;
  if (den == 0.0 || std::abs(den) <= 1e-14 * (std::abs(t1) + std::abs(t2) + t3)) throw DegenerateDenominator();
  return num / den;
}

/// Coefficients (beta, gamma, delta) of the depressed inflection quartic
/// x^4 + beta x^2 + gamma x + delta = p_xx(x, t) / 30.
struct InflectionQuartic {
  double beta, gamma, delta;
};

inline InflectionQuartic inflection_quartic(double b, double c, double d, double t) {
  return {2.0 * b / 5.0 + 6.0 * t, c / 5.0, d / 15.0 + 2.0 * b * t / 5.0 + 3.0 * t * t};
}

/// Root structure of the inflection quartic at a merge time.  t is snapped to
/// the nearest real root of delta_t when it lies within t_tol of one.
inline DoubleRootClass merge_case(double b, double c, double d, double t, double t_tol = 1e-5) {
  const Polynomial delta = delta_t(b, c, d);
  const auto roots = real_roots(delta);
  double best = std::numeric_limits<double>::infinity();
  double snapped = t;
  for (const auto& r : roots) {
    if (std::abs(r.value - t) < best) {
      best = std::abs(r.value - t);
      snapped = r.value;
    }
  }
  if (!(best <= t_tol * (1.0 + std::abs(t)))) throw NotAMergeTime(t);
  const auto q = inflection_quartic(b, c, d, snapped);
  return classify_repeated_depressed_quartic(q.beta, q.gamma, q.delta);
}

struct SexticMerge {
  double t;
  double x;  // in the depressed variable
  DoubleRootClass kind;
};

struct SexticAnalysis {
  SexticForm form;
  Polynomial delta;            // table form
  Polynomial resultant;        // generic elimination of x from p_xx, p_xxx
  double table_mismatch = 0;   // max coefficient gap after normalizing both
  std::vector<SexticMerge> merges;
  std::vector<double> negative_roots;
  std::vector<double> rejected_roots;  // roots of delta whose double root is complex
  bool degenerate = false;             // more than two merge times
};

namespace detail {

// Real double root of a quartic known to have a repeated root: the real root
// of its derivative at which |q| is smallest.
inline double common_root(const Polynomial& q) {
  const auto r = real_roots(derivative(q));
  double best_x = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : r) {
    const double val = std::abs(q(v.value));
    if (val < best) {
      best = val;
      best_x = v.value;
    }
  }
  return best_x;
}

inline double normalized_gap(const Polynomial& a, const Polynomial& b) {
  if (a.degree() != b.degree() || a.is_zero()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  const double scale = std::max(max_abs_coeff(a * (1.0 / a.leading())), 1.0);
  for (int k = 0; k <= a.degree(); ++k)
    gap = std::max(gap, std::abs(a[k] / a.leading() - b[k] / b.leading()) / scale);
  return gap;
}

}  // namespace detail

/// Full merge analysis of a degree-6 polynomial: both discriminant routes,
/// merge times t >= 0, double-root abscissae and case tags.
inline SexticAnalysis analyze_sextic(const Polynomial& p) {
  SexticAnalysis a;
  a.form = depress(p);
  const auto& s = a.form;
  a.delta = delta_t(s.b, s.c, s.d);
  const TPoly sym = evolve_symbolic(s.depressed()).sym;
  const TPoly pxx = derivative(sym, 2);
  const TPoly pxxx = derivative(sym, 3);
  a.resultant = resultant_in_t(pxx, pxxx);
  a.table_mismatch = detail::normalized_gap(a.delta, a.resultant);

  const double scale = coeff_scale(s.depressed());
  for (const auto& r : real_roots(a.delta)) {
    double t = r.value;
    if (t < -1e-12) {
      a.negative_roots.push_back(t);
      continue;
    }
    t = std::max(t, 0.0);
    double x = 0.0;
    bool have_x = false;
    if (s.c != 0.0) {
      try {
        x = x_of_t(s.b, s.c, s.d, t);
        have_x = true;
      } catch (const DegenerateDenominator&) {
      }
    }
    const Polynomial slice = at_t(pxx, t);
    if (!have_x) x = detail::common_root(slice);
    const double rxx = std::abs(slice(x));
    const double rxxx = std::abs(at_t(pxxx, t)(x));
    if (rxx > 1e-7 * scale || rxxx > 1e-7 * scale) {
      a.rejected_roots.push_back(t);
      continue;
    }
    const auto q = inflection_quartic(s.b, s.c, s.d, t);
    a.merges.push_back({t, x, classify_repeated_depressed_quartic(q.beta, q.gamma, q.delta)});
  }
  a.degenerate = a.merges.size() > 2;
  return a;
}

}  // namespace heatflow
