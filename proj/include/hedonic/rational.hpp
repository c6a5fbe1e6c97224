#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "hedonic/errors.hpp"

namespace hedonic {

/// Exact rational scalar. Always stored reduced with a positive denominator.
/// Expression templates are off so values behave as plain regular types
/// (auto, std::max, lambdas returning by value).
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline BigInt ceil_div(const Rational& r) {
  BigInt num = numerator_of(r);
  BigInt den = denominator_of(r);
  BigInt q = num / den;  // truncates toward zero
  if (q * den != num && num > 0) ++q;
  return q;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

/// Exact conversion of a finite binary double.
inline Rational from_double(double value) {
  if (!std::isfinite(value)) throw ParseError("non-finite number cannot be represented exactly");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // mantissa in [0.5, 1): scale to a 53-bit integer
  constexpr int kBits = std::numeric_limits<double>::digits;
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, kBits));
  exponent -= kBits;
  Rational out(scaled);
  BigInt two_pow = BigInt(1) << std::abs(exponent);
  if (exponent >= 0) {
    out *= Rational(two_pow);
  } else {
    out /= Rational(two_pow);
  }
  return out;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

/// Decimal digits to an integer. Leading zeros are stripped because the
/// backend reads a leading 0 as an octal prefix.
inline BigInt from_digits(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return BigInt{std::string(s)};
}

inline BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("malformed rational '" + std::string(whole) + "'");
  BigInt v = from_digits(s);
  return negative ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "p/q", an integer, or a decimal literal ("-0.125", "1e-3") exactly.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!detail::all_digits(den_text)) throw ParseError("malformed rational '" + std::string(text) + "'");
    BigInt den = detail::from_digits(den_text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  std::int64_t exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    BigInt e_val = detail::parse_integer(s.substr(e + 1), text);
    if (e_val > 4096 || e_val < -4096) throw ParseError("exponent out of range in '" + std::string(text) + "'");
    exp10 = e_val.convert_to<std::int64_t>();
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((!ip.empty() && !detail::all_digits(ip)) || (!fp.empty() && !detail::all_digits(fp)) ||
        (ip.empty() && fp.empty()))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<std::int64_t>(fp.size());
  } else {
    if (!detail::all_digits(s)) throw ParseError("malformed rational '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Rational out{detail::from_digits(digits)};
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(exp10)));
  if (exp10 >= 0) {
    out *= Rational(scale);
  } else {
    out /= Rational(scale);
  }
  return negative ? Rational(-out) : out;
}

}  // namespace hedonic
