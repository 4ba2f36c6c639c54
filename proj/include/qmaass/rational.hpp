#pragma once

// Exact scalar types shared by every module: arbitrary-precision integers and
// rationals, plus the parsing/formatting used by the JSON and CSV layers.

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace qmaass {

// Expression templates are disabled so the types behave as plain values in
// generic code (auto, std::pair construction, ternaries).
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// p/q with the sign moved to the numerator.
inline Rational ratio(BigInt p, BigInt q) {
  if (q == 0) throw std::domain_error("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Rational(p, q);
}

inline Rational make_rational(long long p, long long q = 1) { return ratio(BigInt(p), BigInt(q)); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline BigInt floor_of(const Rational& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

/// Fractional part in [0, 1).
inline Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

template <class T>
long long to_ll(const T& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw std::overflow_error("value does not fit in 64 bits");
  return static_cast<long long>(v);
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// "p/q" always, denominators positive; used by the series serializer.
inline std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return to_fraction_string(r);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

namespace detail {
inline BigInt parse_bigint(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("empty integer in '" + std::string(s) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("not an exact integer: '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}
}  // namespace detail

/// Parses "p", "p/q" or "-p/q". Decimal points and exponents are rejected so
/// exact inputs never pass through floating point.
inline Rational parse_rational(std::string_view text) {
  auto s = detail::trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_bigint(s));
  BigInt p = detail::parse_bigint(detail::trim(s.substr(0, slash)));
  BigInt q = detail::parse_bigint(detail::trim(s.substr(slash + 1)));
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return ratio(p, q);
}

inline long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

}  // namespace qmaass
