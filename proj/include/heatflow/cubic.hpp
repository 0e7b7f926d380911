#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

#include "heatflow/roots.hpp"

namespace heatflow {

/// Sign-preserving real cube root.
inline double real_cbrt(double v) { return std::cbrt(v); }

/// v^{2/3} taken as (real cube root)^2, so negative radicands are allowed.
inline double real_pow_two_thirds(double v) {
  const double r = std::cbrt(v);
  return r * r;
}

enum class CubicCase {
  ThreeDistinct,       // discriminant < 0
  SingleAndDouble,     // discriminant == 0
  OneReal,             // discriminant > 0
};

struct CubicSolution {
  RootSet roots;
  CubicCase kind;
  double discriminant;  // g^2/4 + f^3/27
};

/// Real roots of x^3 + alpha x^2 + beta x + gamma = 0 by the trigonometric
/// and Cardano formulas.  The discriminant counts as zero when it is below
/// 1e-14 of the magnitudes it is built from.
inline CubicSolution solve_cubic(double alpha, double beta, double gamma) {
  const double f = beta - alpha * alpha / 3.0;
  const double g = 2.0 * alpha * alpha * alpha / 27.0 - alpha * beta / 3.0 + gamma;
  const double disc = g * g / 4.0 + f * f * f / 27.0;
  const double disc_scale = g * g / 4.0 + std::abs(f * f * f) / 27.0;
  const double shift = alpha / 3.0;

  CubicSolution sol{};
  sol.discriminant = disc;
  if (disc_scale == 0.0 || std::abs(disc) <= 1e-14 * disc_scale) {
    const double r = real_cbrt(g / 2.0);
    if (r == 0.0) {
      sol.roots.roots = {{-shift, 3}};
    } else {
      const double single = -2.0 * r - shift;
      const double dbl = r - shift;
      if (single < dbl)
        sol.roots.roots = {{single, 1}, {dbl, 2}};
      else
        sol.roots.roots = {{dbl, 2}, {single, 1}};
    }
    sol.kind = CubicCase::SingleAndDouble;
  } else if (disc < 0.0) {
    const double s = std::sqrt(-f);
    const double amp = 2.0 / std::sqrt(3.0) * s;
    const double arg = std::clamp(3.0 * std::sqrt(3.0) * g / (2.0 * s * s * s), -1.0, 1.0);
    const double theta = std::asin(arg) / 3.0;
    constexpr double pi = std::numbers::pi;
    std::array<double, 3> x{amp * std::sin(theta) - shift, -amp * std::sin(theta + pi / 3.0) - shift,
                            amp * std::cos(theta + pi / 6.0) - shift};
    std::sort(x.begin(), x.end());
    sol.roots.roots = {{x[0], 1}, {x[1], 1}, {x[2], 1}};
    sol.kind = CubicCase::ThreeDistinct;
  } else {
    const double sq = std::sqrt(disc);
    sol.roots.roots = {{real_cbrt(-g / 2.0 + sq) + real_cbrt(-g / 2.0 - sq) - shift, 1}};
    sol.kind = CubicCase::OneReal;
  }
  return sol;
}

/// Elementary symmetric functions and power sums of three numbers.
struct PowerSums {
  double e1, e2, e3;
  double p2, p3, p4;
};

inline PowerSums power_sums_check(double x1, double x2, double x3) {
  PowerSums s{};
  s.e1 = x1 + x2 + x3;
  s.e2 = x1 * x2 + x2 * x3 + x3 * x1;
  s.e3 = x1 * x2 * x3;
  s.p2 = x1 * x1 + x2 * x2 + x3 * x3;
  s.p3 = x1 * x1 * x1 + x2 * x2 * x2 + x3 * x3 * x3;
  s.p4 = x1 * x1 * x1 * x1 + x2 * x2 * x2 * x2 + x3 * x3 * x3 * x3;
  return s;
}

/// Power sums predicted from the coefficients of x^3 + alpha x^2 + beta x + gamma
/// via Newton's identities.
inline PowerSums power_sums_from_coefficients(double alpha, double beta, double gamma) {
  PowerSums s{};
  s.e1 = -alpha;
  s.e2 = beta;
  s.e3 = -gamma;
  s.p2 = alpha * alpha - 2.0 * beta;
  s.p3 = -alpha * alpha * alpha + 3.0 * alpha * beta - 3.0 * gamma;
  s.p4 = alpha * alpha * alpha * alpha - 4.0 * alpha * alpha * beta + 2.0 * beta * beta + 4.0 * alpha * gamma;
  return s;
}

// ---------------------------------------------------------------------------
// Depressed quartic x^4 + beta x^2 + gamma x + delta

enum class DoubleRootClass {
  NoRepeatedRoot,
  DoublePlusTwoDistinctReal,
  DoublePlusComplexPair,
  TwoRealDoubles,
  TwoComplexDoubles,
  TripleRoot,
  QuadrupleRoot,
};

inline std::string_view to_string(DoubleRootClass c) {
  switch (c) {
    case DoubleRootClass::NoRepeatedRoot: return "NoRepeatedRoot";
    case DoubleRootClass::DoublePlusTwoDistinctReal: return "DoublePlusTwoDistinctReal";
    case DoubleRootClass::DoublePlusComplexPair: return "DoublePlusComplexPair";
    case DoubleRootClass::TwoRealDoubles: return "TwoRealDoubles";
    case DoubleRootClass::TwoComplexDoubles: return "TwoComplexDoubles";
    case DoubleRootClass::TripleRoot: return "TripleRoot";
    case DoubleRootClass::QuadrupleRoot: return "QuadrupleRoot";
  }
  return "?";
}

/// Discriminant of x^4 + beta x^2 + gamma x + delta, and the sum of the
/// magnitudes of its terms (for relative zero tests).
struct QuarticDiscriminant {
  double value;
  double scale;
};

inline QuarticDiscriminant depressed_quartic_discriminant(double beta, double gamma, double delta) {
  const double b2 = beta * beta;
  const double g2 = gamma * gamma;
  const std::array<double, 6> terms{256.0 * delta * delta * delta,
                                    -128.0 * b2 * delta * delta,
                                    144.0 * beta * g2 * delta,
                                    -27.0 * g2 * g2,
                                    16.0 * b2 * b2 * delta,
                                    -4.0 * b2 * beta * g2};
  QuarticDiscriminant d{0.0, 0.0};
  for (double v : terms) {
    d.value += v;
    d.scale += std::abs(v);
  }
  return d;
}

/// Root structure of a depressed quartic already known to have a vanishing
/// discriminant.  tol is relative to the natural magnitude of each quantity.
inline DoubleRootClass classify_repeated_depressed_quartic(double beta, double gamma, double delta,
                                                           double tol = 1e-9) {
  const double P = 8.0 * beta;
  const double R = 8.0 * gamma;
  const double D0 = beta * beta + 12.0 * delta;
  const double D = 64.0 * delta - 16.0 * beta * beta;
  const double mag = std::max({beta * beta, std::abs(delta), std::abs(gamma) * std::sqrt(std::abs(beta)),
                               std::pow(std::abs(gamma), 4.0 / 3.0)});
  auto zero = [&](double v, double scale) { return std::abs(v) <= tol * scale || scale == 0.0; };
  const bool D0_zero = zero(D0, beta * beta + 12.0 * std::abs(delta) + tol * mag);
  const bool D_zero = zero(D, 64.0 * std::abs(delta) + 16.0 * beta * beta + tol * mag);
  const bool P_zero = zero(P, 8.0 * std::sqrt(mag));
  const bool R_zero = zero(R, 8.0 * std::pow(mag, 0.75));

  if (D0_zero && D_zero) return DoubleRootClass::QuadrupleRoot;
  if (D0_zero) return DoubleRootClass::TripleRoot;
  if (D_zero && R_zero) return P < 0.0 ? DoubleRootClass::TwoRealDoubles : DoubleRootClass::TwoComplexDoubles;
  if (P < 0.0 && !P_zero && D < 0.0 && !D_zero) return DoubleRootClass::DoublePlusTwoDistinctReal;
  return DoubleRootClass::DoublePlusComplexPair;
}

/// Repeated-root structure of x^4 + beta x^2 + gamma x + delta.
inline DoubleRootClass classify_depressed_quartic(double beta, double gamma, double delta,
                                                  double tol = 1e-9) {
  const auto disc = depressed_quartic_discriminant(beta, gamma, delta);
  if (disc.scale != 0.0 && std::abs(disc.value) > tol * disc.scale) return DoubleRootClass::NoRepeatedRoot;
  return classify_repeated_depressed_quartic(beta, gamma, delta, tol);
}

}  // namespace heatflow
