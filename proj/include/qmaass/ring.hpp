#pragma once

// The coefficient-ring interface used by QSeries. Each ring provides zero/one,
// a zero test, unit test and inverse, exact halving, embedding into Q(zeta),
// and an exact string form.

#include <stdexcept>
#include <string>

#include "qmaass/cyclotomic.hpp"
#include "qmaass/rational.hpp"

namespace qmaass {

template <class R>
struct ring_traits;

template <>
struct ring_traits<BigInt> {
  static constexpr const char* name = "integer";
  static BigInt from_int(long long v) { return BigInt(v); }
  static bool is_zero(const BigInt& x) { return x == 0; }
  static bool is_unit(const BigInt& x) { return x == 1 || x == -1; }
  static BigInt inverse(const BigInt& x) {
    if (!is_unit(x)) throw std::domain_error("integer is not a unit");
    return x;
  }
  static BigInt divide_exact(const BigInt& x, long long d) {
    if (x % d != 0) throw std::domain_error("inexact integer division");
    return x / d;
  }
  static CycNumber embed(const BigInt& x) { return CycNumber(Rational(x)); }
  static Rational to_rational(const BigInt& x) { return Rational(x); }
  static std::string str(const BigInt& x) { return x.str() + "/1"; }
};

template <>
struct ring_traits<Rational> {
  static constexpr const char* name = "rational";
  static Rational from_int(long long v) { return Rational(v); }
  static bool is_zero(const Rational& x) { return x == 0; }
  static bool is_unit(const Rational& x) { return x != 0; }
  static Rational inverse(const Rational& x) {
    if (x == 0) throw std::domain_error("inverse of zero");
    return Rational(1) / x;
  }
  static Rational divide_exact(const Rational& x, long long d) { return x / Rational(d); }
  static CycNumber embed(const Rational& x) { return CycNumber(x); }
  static Rational to_rational(const Rational& x) { return x; }
  static std::string str(const Rational& x) { return to_fraction_string(x); }
};

template <>
struct ring_traits<CycNumber> {
  static constexpr const char* name = "cyclotomic";
  static CycNumber from_int(long long v) { return CycNumber(v); }
  static bool is_zero(const CycNumber& x) { return x.is_zero(); }
  static bool is_unit(const CycNumber& x) { return !x.is_zero(); }
  static CycNumber inverse(const CycNumber& x) { return x.inverse(); }
  static CycNumber divide_exact(const CycNumber& x, long long d) { return x * CycNumber(make_rational(1, d)); }
  static CycNumber embed(const CycNumber& x) { return x; }
  static Rational to_rational(const CycNumber& x) {
    Rational r;
    if (!x.is_rational(&r)) throw std::domain_error("cyclotomic value is not rational");
    return r;
  }
  static std::string str(const CycNumber& x) {
    Rational r;
    if (x.is_rational(&r)) return to_fraction_string(r);
    std::string s = "cyc(" + std::to_string(x.order()) + ":";
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) s += (i ? "," : "") + to_fraction_string(x.coeffs()[i]);
    return s + ")";
  }
};

}  // namespace qmaass
