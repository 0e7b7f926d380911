#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include "heatflow/heat.hpp"
#include "heatflow/roots.hpp"

namespace heatflow {

enum class CriticalKind { Min, Max, InflectionCritical };

inline std::string_view to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::Min: return "min";
    case CriticalKind::Max: return "max";
    case CriticalKind::InflectionCritical: return "inflection-critical";
  }
  return "?";
}

struct CriticalPoint {
  double x;
  double value;
  CriticalKind kind;
};

struct OracleResult {
  std::vector<double> minimizers;
  double value = 0.0;
  std::vector<CriticalPoint> critical_points;
};

inline constexpr double kMatchTol = 1e-4;

/// Classify a critical point by the first derivative (order >= 2) that does
/// not vanish relative to its own term magnitude.
inline CriticalKind classify_critical(const Polynomial& p, double x, double tol = 1e-9) {
  Polynomial d = derivative(p, 2);
  for (int order = 2; !d.is_zero(); ++order) {
    const double v = d(x);
    if (std::abs(v) > tol * magnitude_at(d, x) || d.degree() == 0) {
      if (order % 2 == 1) return CriticalKind::InflectionCritical;
      return v > 0.0 ? CriticalKind::Min : CriticalKind::Max;
    }
    d = derivative(d);
  }
  return CriticalKind::InflectionCritical;
}

/// Global minimization by enumerating every real critical point.
inline OracleResult brute_force_min(const Polynomial& p) {
  require_even_positive(p);
  OracleResult res;
  if (p.degree() == 0) {
    res.minimizers = {0.0};
    res.value = p[0];
    return res;
  }
  const auto crit = real_roots(derivative(p));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : crit) {
    CriticalPoint cp{r.value, p(r.value), classify_critical(p, r.value)};
    res.critical_points.push_back(cp);
    best = std::min(best, cp.value);
  }
  res.value = best;
  const double tie_tol = 1e-9 * (1.0 + std::abs(best));
  for (const auto& cp : res.critical_points)
    if (cp.value <= best + tie_tol) res.minimizers.push_back(cp.x);
  return res;
}

struct MethodCheck {
  bool match;
  double distance;  // to the nearest oracle minimizer
};

/// Whether candidate is within match_tol of some global minimizer.
inline MethodCheck verify_method(const Polynomial& p, double candidate, double match_tol = kMatchTol) {
  const auto oracle = brute_force_min(p);
  double dist = std::numeric_limits<double>::infinity();
  for (double m : oracle.minimizers) dist = std::min(dist, std::abs(candidate - m));
  return {dist <= match_tol, dist};
}

}  // namespace heatflow
