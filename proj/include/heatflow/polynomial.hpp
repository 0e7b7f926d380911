#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace heatflow {

template <class R>
class BasicPolynomial;

namespace detail {

inline bool is_zero_coeff(double v) { return v == 0.0; }

template <class R>
bool is_zero_coeff(const BasicPolynomial<R>& p) {
  return p.is_zero();
}

}  // namespace detail

/// Dense univariate polynomial over a commutative ring R, lowest power first.
///
/// R is either `double` (ordinary real polynomials) or another polynomial type,
/// which gives polynomials in x whose coefficients are polynomials in t.
/// The representation is kept trimmed: the last stored coefficient is nonzero,
/// and the zero polynomial stores nothing.
template <class R>
class BasicPolynomial {
 public:
  using value_type = R;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
  BasicPolynomial(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }

  static BasicPolynomial constant(R value) { return BasicPolynomial(std::vector<R>{std::move(value)}); }

  /// x^k scaled by value.
  static BasicPolynomial monomial(int k, R value) {
    std::vector<R> c(static_cast<std::size_t>(k) + 1);
    c.back() = std::move(value);
    return BasicPolynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  std::span<const R> coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  R coefficient(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return R{};
    return c_[static_cast<std::size_t>(k)];
  }
  const R& operator[](std::size_t k) const { return c_[k]; }
  const R& leading() const { return c_.back(); }

  template <class X>
  auto operator()(const X& x) const {
    using Out = decltype(std::declval<R>() * std::declval<X>());
    Out acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  BasicPolynomial& operator*=(double s) {
    for (auto& v : c_) v = v * s;
    trim();
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator-(BasicPolynomial a) {
    for (auto& v : a.c_) v = v * -1.0;
    return a;
  }
  friend BasicPolynomial operator*(BasicPolynomial a, double s) { return a *= s; }
  friend BasicPolynomial operator*(double s, BasicPolynomial a) { return a *= s; }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    return BasicPolynomial(std::move(out));
  }

  friend bool operator==(const BasicPolynomial&, const BasicPolynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && detail::is_zero_coeff(c_.back())) c_.pop_back();
  }

  std::vector<R> c_;
};

using Polynomial = BasicPolynomial<double>;

/// Polynomial in x whose coefficients are polynomials in t.
using TPoly = BasicPolynomial<Polynomial>;

/// k-th derivative in the main variable.
template <class R>
BasicPolynomial<R> derivative(const BasicPolynomial<R>& p, int k = 1) {
  if (k <= 0) return p;
  const int n = p.degree();
  if (n < k) return {};
  std::vector<R> out(static_cast<std::size_t>(n - k + 1));
  for (int i = k; i <= n; ++i) {
    double factor = 1.0;
    for (int j = 0; j < k; ++j) factor *= static_cast<double>(i - j);
    out[static_cast<std::size_t>(i - k)] = p[static_cast<std::size_t>(i)] * factor;
  }
  return BasicPolynomial<R>(std::move(out));
}

/// Antiderivative with zero constant term.
inline Polynomial antiderivative(const Polynomial& p) {
  std::vector<double> out(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(out));
}

/// p(x + s) by repeated synthetic division.
inline Polynomial taylor_shift(const Polynomial& p, double s) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += s * c[j];
  return Polynomial(std::move(c));
}

/// max |c_k|, 0 for the zero polynomial.
inline double max_abs_coeff(const Polynomial& p) {
  double m = 0.0;
  for (double v : p.coeffs()) m = std::max(m, std::abs(v));
  return m;
}

/// The scale 1 + max |c_k| used by every relative tolerance in the library.
inline double coeff_scale(const Polynomial& p) { return 1.0 + max_abs_coeff(p); }

/// sum |c_k| |x|^k: the magnitude against which rounding in p(x) is measured.
inline double magnitude_at(const Polynomial& p, double x) {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

/// All complex roots lie strictly inside |z| < cauchy_bound(p).
inline double cauchy_bound(const Polynomial& p) {
  const int n = p.degree();
  if (n <= 0) return 1.0;
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(p[i] / p.leading()));
  return 1.0 + m;
}

inline Polynomial make_monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p * (1.0 / p.leading());
}

/// Polynomial long division a = q b + r.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  const int m = a.degree();
  const int n = b.degree();
  if (n < 0) return {Polynomial{}, a};
  if (m < n) return {Polynomial{}, a};
  std::vector<double> r(a.coeffs().begin(), a.coeffs().end());
  std::vector<double> q(static_cast<std::size_t>(m - n + 1), 0.0);
  for (int k = m - n; k >= 0; --k) {
    const double f = r[static_cast<std::size_t>(k + n)] / b.leading();
    q[static_cast<std::size_t>(k)] = f;
    for (int j = 0; j <= n; ++j) r[static_cast<std::size_t>(k + j)] -= f * b[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(k + n)] = 0.0;
  }
  r.resize(static_cast<std::size_t>(n));
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

/// Drop leading coefficients below rel * max |c_k|.
inline Polynomial chop(const Polynomial& p, double rel) {
  const double cutoff = rel * max_abs_coeff(p);
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Bivariate helpers

/// Substitute a value for t in every x-coefficient.
inline Polynomial at_t(const TPoly& p, double t) {
  std::vector<double> c;
  c.reserve(p.size());
  for (const auto& ct : p.coeffs()) c.push_back(ct(t));
  return Polynomial(std::move(c));
}

/// Lift a polynomial with constant (t-free) coefficients.
inline TPoly lift(const Polynomial& p) {
  std::vector<Polynomial> c;
  c.reserve(p.size());
  for (double v : p.coeffs()) c.push_back(Polynomial::constant(v));
  return TPoly(std::move(c));
}

/// d/dt applied to every x-coefficient.
inline TPoly t_derivative(const TPoly& p, int k = 1) {
  std::vector<Polynomial> c;
  c.reserve(p.size());
  for (const auto& ct : p.coeffs()) c.push_back(derivative(ct, k));
  return TPoly(std::move(c));
}

/// Value at a point (x, t) without materializing the slice.
inline double eval_xt(const TPoly& p, double x, double t) {
  double acc = 0.0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * x + (*it)(t);
  return acc;
}

/// Largest t-degree over all x-coefficients.
inline int t_degree(const TPoly& p) {
  int d = -1;
  for (const auto& ct : p.coeffs()) d = std::max(d, ct.degree());
  return d;
}

}  // namespace heatflow
