#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "heatflow/errors.hpp"
#include "heatflow/polynomial.hpp"

namespace heatflow {

class SyntaxError : public DomainError {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : DomainError("syntax error at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class MultipleVariables : public DomainError {
 public:
  MultipleVariables(char first, char second)
      : DomainError(std::string("expression uses two variables '") + first + "' and '" + second + "'") {}
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) throw SyntaxError(pos_, "empty expression");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = (peek() == '-') ? -1.0 : 1.0;
        ++pos_;
        skip_ws();
      } else if (!first) {
        throw SyntaxError(pos_, std::string("expected '+' or '-', found '") + peek() + "'");
      }
      parse_term(sign);
      first = false;
      skip_ws();
    }
    return Polynomial(coeffs_);
  }

 private:
  void parse_term(double sign) {
    const std::size_t start = pos_;
    double coeff = 1.0;
    bool have_number = false;
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
      coeff = parse_number();
      have_number = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        if (at_end() || !std::isalpha(static_cast<unsigned char>(peek())))
          throw SyntaxError(pos_, "expected a variable after '*'");
      }
    }
    int power = 0;
    if (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
      note_variable(peek());
      ++pos_;
      power = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
          throw SyntaxError(pos_, "exponent must be a nonnegative integer");
        power = parse_exponent();
      }
    } else if (!have_number) {
      if (at_end()) throw SyntaxError(pos_, "expected a term");
      if (peek() == '(' || peek() == ')')
        throw SyntaxError(pos_, "parentheses are not supported; pass coefficients with --coeffs instead");
      throw SyntaxError(start, std::string("unexpected character '") + peek() + "'");
    }
    if (coeffs_.size() <= static_cast<std::size_t>(power)) coeffs_.resize(static_cast<std::size_t>(power) + 1, 0.0);
    coeffs_[static_cast<std::size_t>(power)] += sign * coeff;
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      // Exponent only when followed by digits; otherwise 'e' is a variable.
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw SyntaxError(start, "malformed number");
    return value;
  }

  int parse_exponent() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || value > 4096) throw SyntaxError(start, "exponent out of range");
    return value;
  }

  void note_variable(char v) {
    if (!var_) {
      var_ = v;
    } else if (*var_ != v) {
      throw MultipleVariables(*var_, v);
    }
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::optional<char> var_;
  std::vector<double> coeffs_;
};

inline std::string shortest_repr(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parse a sum of signed terms such as "x^4-8x^3-18x^2+56x" or "2*t^2 + 0.5".
inline Polynomial parse(std::string_view expr) { return detail::ExprParser(expr).parse(); }

/// Render in descending powers with shortest round-trip coefficients, so that
/// parse(format(p)) == p.
inline std::string format(const Polynomial& p, char var = 'x') {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const double c = p[static_cast<std::size_t>(k)];
    if (c == 0.0) continue;
    const double mag = std::abs(c);
    if (c < 0.0)
      out += '-';
    else if (!out.empty())
      out += '+';
    if (k == 0 || mag != 1.0) out += detail::shortest_repr(mag);
    if (k >= 1) out += var;
    if (k >= 2) out += '^' + std::to_string(k);
  }
  return out;
}

/// Coefficients listed highest power first, comma separated ("1,0,-3,2").
inline Polynomial parse_descending_coeffs(std::string_view list) {
  std::vector<double> desc;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t end = list.find(',', pos);
    if (end == std::string_view::npos) end = list.size();
    std::string_view item = list.substr(pos, end - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw SyntaxError(pos, "malformed coefficient '" + std::string(item) + "'");
    desc.push_back(v);
    pos = end + 1;
  }
  return Polynomial(std::vector<double>(desc.rbegin(), desc.rend()));
}

}  // namespace heatflow
