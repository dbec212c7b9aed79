#ifndef AFV_RATIONAL_HPP
#define AFV_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "afv/error.hpp"

namespace afv {

/// Exact rational arithmetic (GMP backed, no expression templates so that
/// `auto` behaves like a value type in generic code).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename T>
inline constexpr bool is_exact_v = !std::is_floating_point_v<T>;

inline double to_double(const Rational& r) { return static_cast<double>(r); }
inline double to_double(double d) { return d; }

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& r) { return r.str(); }

/// 17 significant digits, enough to round-trip any double.
inline std::string to_string(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

namespace detail {

inline Integer pow10(unsigned k) {
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6)
      throw InputError("invalid number '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  std::string_view int_part = s, frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) ||
      (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part)))
    throw InputError("invalid number '" + std::string(text) + "'");
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());
  Rational value{Integer(digits)};
  if (exponent > 0) value *= Rational(pow10(static_cast<unsigned>(exponent)));
  if (exponent < 0) value /= Rational(pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-value) : value;
}

}  // namespace detail

/// Parses "p/q", "p", or a decimal such as "-1.25e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = detail::parse_decimal(text.substr(0, slash));
    Rational den = detail::parse_decimal(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return detail::parse_decimal(text);
}

/// The rational whose decimal expansion is the shortest round-trip form of
/// `d`, so that 0.1 maps to 1/10 rather than the binary neighbour.
inline Rational rational_from_double(double d) {
  if (!std::isfinite(d)) throw InputError("non-finite number");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return detail::parse_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

inline Rational factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return Rational(r);
}

/// A scalar that remembers whether it was computed exactly.
class Real {
 public:
  Real() : value_(Rational(0)) {}
  Real(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Real(double d) : value_(d) {}               // NOLINT(google-explicit-constructor)

  bool exact() const { return std::holds_alternative<Rational>(value_); }
  double to_double() const {
    return exact() ? afv::to_double(std::get<Rational>(value_)) : std::get<double>(value_);
  }
  const Rational& rational() const {
    if (!exact()) throw std::logic_error("Real::rational() on an inexact value");
    return std::get<Rational>(value_);
  }
  std::string str() const {
    return exact() ? to_string(std::get<Rational>(value_)) : to_string(std::get<double>(value_));
  }

 private:
  std::variant<Rational, double> value_;
};

}  // namespace afv

#endif  // AFV_RATIONAL_HPP
