#pragma once

// Independent reference computations used by the tests.  None of these call
// into the library's own algorithms beyond plain polynomial evaluation.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "heatflow/polynomial.hpp"

namespace testsupport {

using heatflow::Polynomial;

/// Product of (x - r) over the given roots, times lead.
inline Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0) {
  Polynomial p = Polynomial::constant(lead);
  for (double r : roots) p = p * Polynomial{-r, 1.0};
  return p;
}

/// Probabilists' Gauss-Hermite rule (weight exp(-z^2/2)/sqrt(2 pi)) by the
/// Golub-Welsch eigenvalue method.
struct Quadrature {
  std::vector<double> nodes, weights;
};

inline Quadrature gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    q.weights.push_back(v * v);
  }
  return q;
}

/// E[p(x + sqrt(t) Z)] for a standard normal Z: the Gaussian-filtered value.
inline double gaussian_smooth(const Polynomial& p, double x, double t) {
  static const Quadrature q = gauss_hermite(24);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * p(x + std::sqrt(t) * q.nodes[i]);
  return s;
}

/// Complex roots by companion-matrix eigenvalues.
inline std::vector<std::complex<double>> companion_roots(const Polynomial& p) {
  const int n = p.degree();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -p.coefficient(i) / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

/// Minimum of p over a uniform grid of n points on [lo, hi].
inline std::pair<double, double> grid_min(const Polynomial& p, double lo, double hi, int n) {
  double bx = lo, bv = p(lo);
  for (int i = 1; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double v = p(x);
    if (v < bv) bv = v, bx = x;
  }
  return {bx, bv};
}

/// Grid minimum refined by golden-section search in the bracketing cells.
inline double refined_min_location(const Polynomial& p, double lo, double hi, int n = 20001) {
  const auto [x0, v0] = grid_min(p, lo, hi, n);
  (void)v0;
  const double h = (hi - lo) / (n - 1);
  double a = x0 - h, b = x0 + h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (p(c) < p(d))
      b = d;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

inline Polynomial random_poly(std::mt19937_64& rng, int degree, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) v = u(rng);
  return Polynomial(c);
}

/// Random even-degree polynomial with a positive leading coefficient in [0.5, 2].
inline Polynomial random_bounded_below(std::mt19937_64& rng, int degree, double lo, double hi) {
  Polynomial p = random_poly(rng, degree - 1, lo, hi);
  std::uniform_real_distribution<double> l(0.5, 2.0);
  return p + Polynomial::monomial(degree, l(rng));
}

inline double max_coeff_gap(const Polynomial& a, const Polynomial& b) {
  double g = 0.0;
  for (int k = 0; k <= std::max(a.degree(), b.degree()); ++k) g = std::max(g, std::abs(a.coefficient(k) - b.coefficient(k)));
  return g;
}

}  // namespace testsupport
