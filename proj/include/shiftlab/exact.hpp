#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "shiftlab/error.hpp"

namespace shiftlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw usage_error("isqrt: negative argument");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  const auto r = isqrt(n);
  return r * r == n;
}

inline BigInt ipow(std::int64_t base, std::uint64_t exp) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
}

inline Rational rpow(Rational base, std::uint64_t exp) {
  Rational result = 1;
  while (exp > 0) {
    if (exp & 1u) result *= base;
    base *= base;
    exp >>= 1u;
  }
  return result;
}

/// 2^-e as an exact rational.
inline Rational inverse_power_of_two(std::uint64_t e) {
  return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(e));
}

/// ceil(log2 x) for x >= 1.
inline std::uint64_t ceil_log2(const BigInt& x) {
  if (x < 1) throw usage_error("ceil_log2: argument must be >= 1");
  if (x == 1) return 0;
  return boost::multiprecision::msb(BigInt(x - 1)) + 1;
}

inline std::uint64_t ceil_log2(std::uint64_t x) {
  if (x == 0) throw usage_error("ceil_log2: argument must be >= 1");
  if (x == 1) return 0;
  return 64 - static_cast<std::uint64_t>(__builtin_clzll(x - 1));
}

/// Natural logarithm of a positive big integer, accurate to double precision.
inline double log_big(const BigInt& x) {
  if (x <= 0) throw usage_error("log_big: argument must be positive");
  const auto bits = boost::multiprecision::msb(x);
  if (bits < 960) return std::log(x.convert_to<double>());
  const auto shift = static_cast<unsigned>(bits - 62);
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Parses "3/10", "0.3", "2" or "1e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return usage_error("not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::string num(text.substr(0, slash));
    const std::string den(text.substr(slash + 1));
    if (num.empty() || den.empty()) throw fail();
    try {
      const BigInt d(den);
      if (d == 0) throw fail();
      return Rational(BigInt(num), d);
    } catch (const std::runtime_error&) {
      throw fail();
    }
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  BigInt digits = 0;
  std::int64_t scale = 0;
  bool seen_digit = false;
  bool after_point = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      if (after_point) --scale;
      seen_digit = true;
    } else if (ch == '.' && !after_point) {
      after_point = true;
    } else if (ch == 'e' || ch == 'E') {
      break;
    } else {
      throw fail();
    }
  }
  if (!seen_digit) throw fail();
  if (i < text.size()) {
    const std::string exponent(text.substr(i + 1));
    if (exponent.empty()) throw fail();
    try {
      std::size_t used = 0;
      scale += std::stoll(exponent, &used);
      if (used != exponent.size()) throw fail();
    } catch (const std::logic_error&) {
      throw fail();
    }
  }
  Rational value(digits);
  if (scale > 0) value *= Rational(ipow(10, static_cast<std::uint64_t>(scale)));
  if (scale < 0) value /= Rational(ipow(10, static_cast<std::uint64_t>(-scale)));
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& r) {
  const auto den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

}  // namespace shiftlab
