#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "heatflow/errors.hpp"
#include "heatflow/polynomial.hpp"

namespace heatflow {

/// Exact quotient a / b when b divides a; the remainder (rounding noise in
/// floating arithmetic) is discarded.
inline double exact_divide(double a, double b) { return a / b; }
inline Polynomial exact_divide(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }

template <class R>
using Matrix = std::vector<std::vector<R>>;

/// Determinant by fraction-free (Bareiss) elimination.  Every division is
/// exact in the ring, so the method works for matrices over polynomial rings.
template <class R>
R bareiss_determinant(Matrix<R> m) {
  const std::size_t n = m.size();
  if (n == 0) return R{1.0};
  R prev{1.0};
  double sign = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (detail::is_zero_coeff(m[k][k])) {
      std::size_t swap = k + 1;
      while (swap < n && detail::is_zero_coeff(m[swap][k])) ++swap;
      if (swap == n) return R{};
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = exact_divide(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
      }
    }
    prev = m[k][k];
  }
  return m[n - 1][n - 1] * sign;
}

/// Sylvester matrix of P (degree m) and Q (degree n) in the main variable:
/// n shifted rows of P's coefficients then m shifted rows of Q's, highest power first.
template <class R>
Matrix<R> sylvester_matrix(const BasicPolynomial<R>& P, const BasicPolynomial<R>& Q) {
  const int m = P.degree();
  const int n = Q.degree();
  const std::size_t size = static_cast<std::size_t>(m + n);
  Matrix<R> s(size, std::vector<R>(size));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = P[static_cast<std::size_t>(m - k)];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k)
      s[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + k)] = Q[static_cast<std::size_t>(n - k)];
  return s;
}

/// Resultant of P and Q with respect to x, as a polynomial in t.
///
/// The result vanishes at every t where P(., t) and Q(., t) share a (possibly
/// complex) root, and also where both x-leading coefficients vanish.
inline Polynomial resultant_in_t(const TPoly& P, const TPoly& Q) {
  if (P.is_zero() || Q.is_zero()) throw DegenerateLeading();
  const int m = P.degree();
  const int n = Q.degree();
  if (m == 0 && n == 0) return Polynomial::constant(1.0);
  if (m == 0) {
    Polynomial r = Polynomial::constant(1.0);
    for (int i = 0; i < n; ++i) r = r * P[0];
    return r;
  }
  if (n == 0) {
    Polynomial r = Polynomial::constant(1.0);
    for (int i = 0; i < m; ++i) r = r * Q[0];
    return r;
  }
  const auto s = sylvester_matrix(P, Q);
  // Degree bound: each row contributes at most its largest entry degree.
  int bound = 0;
  for (const auto& row : s) {
    int d = 0;
    for (const auto& e : row) d = std::max(d, e.degree());
    bound += d;
  }
  Polynomial det = bareiss_determinant(s);
  std::vector<double> c(det.coeffs().begin(), det.coeffs().end());
  if (static_cast<int>(c.size()) > bound + 1) c.resize(static_cast<std::size_t>(bound) + 1);
  return chop(Polynomial(std::move(c)), 1e-13);
}

}  // namespace heatflow
