#pragma once

// Exact arithmetic in Q(zeta_L), stored in the power basis 1, z, ..., z^{phi(L)-1}
// and reduced modulo the L-th cyclotomic polynomial.

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qmaass/rational.hpp"

namespace qmaass {

namespace detail {

/// Integer polynomial division a / b for monic b; exact division is required.
inline std::vector<BigInt> poly_divide_exact(std::vector<BigInt> a, const std::vector<BigInt>& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw std::logic_error("poly_divide_exact: degree too small");
  std::vector<BigInt> quot(a.size() - db);
  for (std::size_t i = a.size(); i-- > db;) {
    BigInt c = a[i];
    quot[i - db] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  for (std::size_t i = 0; i < db; ++i)
    if (a[i] != 0) throw std::logic_error("poly_divide_exact: nonzero remainder");
  return quot;
}

}  // namespace detail

/// Phi_L as integer coefficients (index = degree), computed by dividing x^L - 1
/// by Phi_d for every proper divisor d of L. Cached process-wide.
inline const std::vector<BigInt>& cyclotomic_polynomial(long long L) {
  if (L < 1) throw std::invalid_argument("cyclotomic order must be >= 1");
  static std::mutex mu;
  static std::map<long long, std::vector<BigInt>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
  }
  std::vector<BigInt> p(static_cast<std::size_t>(L) + 1, BigInt(0));
  p[0] = -1;
  p[static_cast<std::size_t>(L)] = 1;
  for (long long d = 1; d < L; ++d)
    if (L % d == 0) p = detail::poly_divide_exact(std::move(p), cyclotomic_polynomial(d));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(L, std::move(p)).first->second;
}

inline long long euler_phi(long long L) {
  long long r = L;
  for (long long p = 2; p * p <= L; ++p) {
    if (L % p) continue;
    while (L % p == 0) L /= p;
    r -= r / p;
  }
  if (L > 1) r -= r / L;
  return r;
}

class CycNumber {
 public:
  /// The rational 0 in Q(zeta_1) = Q.
  CycNumber() : L_(1), c_(1, Rational(0)) {}
  explicit CycNumber(const Rational& r, long long L = 1) : L_(L), c_(deg(L), Rational(0)) { c_[0] = r; }
  CycNumber(long long v) : CycNumber(Rational(v)) {}  // NOLINT: integers embed implicitly

  /// zeta_L^k for any integer k.
  static CycNumber root(long long L, long long k) {
    if (L < 1) throw std::invalid_argument("root order must be >= 1");
    std::vector<Rational> v(static_cast<std::size_t>(L), Rational(0));
    v[static_cast<std::size_t>(((k % L) + L) % L)] = 1;
    return from_powers(L, std::move(v));
  }

  /// e(w) = exp(2 pi i w) for rational w.
  static CycNumber e(const Rational& w) {
    BigInt den = denominator(w);
    BigInt num = numerator(w) % den;
    return root(to_ll(den), to_ll(num));
  }

  /// Element sum_i v[i] zeta_L^i with arbitrary length v (reduced on entry).
  static CycNumber from_powers(long long L, std::vector<Rational> v) {
    CycNumber r;
    r.L_ = L;
    r.c_ = reduce(L, std::move(v));
    return r;
  }

  long long order() const { return L_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }

  /// True when the value lies in Q; `out` receives it.
  bool is_rational(Rational* out = nullptr) const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    if (out) *out = c_[0];
    return true;
  }

  /// The same number expressed in Q(zeta_M) for a multiple M of L.
  CycNumber lifted(long long M) const {
    if (M == L_) return *this;
    if (M % L_ != 0) throw std::invalid_argument("lift target must be a multiple of the order");
    const long long s = M / L_;
    std::vector<Rational> v(static_cast<std::size_t>(M), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i * static_cast<std::size_t>(s)] = c_[i];
    return from_powers(M, std::move(v));
  }

  /// Galois action zeta -> zeta^k, gcd(k, L) = 1.
  CycNumber galois(long long k) const {
    std::vector<Rational> v(static_cast<std::size_t>(L_), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      long long e = static_cast<long long>(i) * (k % L_) % L_;
      if (e < 0) e += L_;
      v[static_cast<std::size_t>(e)] += c_[i];
    }
    return from_powers(L_, std::move(v));
  }

  CycNumber conj() const { return galois(L_ - 1); }

  std::complex<double> to_complex() const {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      double ang = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(L_);
      s += to_double(c_[i]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
  }

  /// Multiplicative inverse as the product of the nontrivial conjugates over the norm.
  CycNumber inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero cyclotomic number");
    CycNumber prod(Rational(1), L_);
    for (long long k = 2; k < L_; ++k)
      if (std::gcd(k, L_) == 1) prod = prod * galois(k);
    Rational norm;
    if (!(prod * *this).is_rational(&norm)) throw std::logic_error("norm is not rational");
    return prod * CycNumber(Rational(1) / norm);
  }

  CycNumber operator-() const {
    CycNumber r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend CycNumber operator+(const CycNumber& x, const CycNumber& y) {
    if (x.L_ != y.L_) {
      long long M = std::lcm(x.L_, y.L_);
      return x.lifted(M) + y.lifted(M);
    }
    CycNumber r = x;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += y.c_[i];
    return r;
  }
  friend CycNumber operator-(const CycNumber& x, const CycNumber& y) { return x + (-y); }

  friend CycNumber operator*(const CycNumber& x, const CycNumber& y) {
    if (x.L_ != y.L_) {
      long long M = std::lcm(x.L_, y.L_);
      return x.lifted(M) * y.lifted(M);
    }
    std::vector<Rational> v(x.c_.size() + y.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
      if (x.c_[i] == 0) continue;
      for (std::size_t j = 0; j < y.c_.size(); ++j)
        if (y.c_[j] != 0) v[i + j] += x.c_[i] * y.c_[j];
    }
    return from_powers(x.L_, std::move(v));
  }

  CycNumber& operator+=(const CycNumber& o) { return *this = *this + o; }
  CycNumber& operator-=(const CycNumber& o) { return *this = *this - o; }
  CycNumber& operator*=(const CycNumber& o) { return *this = *this * o; }

  /// Equality as field elements, independent of the representing order.
  friend bool operator==(const CycNumber& x, const CycNumber& y) { return (x - y).is_zero(); }

  CycNumber pow(long long e) const {
    CycNumber base = e < 0 ? inverse() : *this;
    unsigned long long n = e < 0 ? -static_cast<unsigned long long>(e) : e;
    CycNumber r(Rational(1), L_);
    while (n) {
      if (n & 1) r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

 private:
  static std::size_t deg(long long L) { return static_cast<std::size_t>(euler_phi(L)); }

  static std::vector<Rational> reduce(long long L, std::vector<Rational> v) {
    // Fold modulo x^L - 1, then divide by the monic Phi_L.
    if (v.size() > static_cast<std::size_t>(L)) {
      for (std::size_t i = static_cast<std::size_t>(L); i < v.size(); ++i)
        if (v[i] != 0) v[i % static_cast<std::size_t>(L)] += v[i];
      v.resize(static_cast<std::size_t>(L));
    }
    const auto& phi = cyclotomic_polynomial(L);
    const std::size_t d = phi.size() - 1;
    for (std::size_t i = v.size(); i-- > d;) {
      if (v[i] == 0) continue;
      Rational c = v[i];
      for (std::size_t j = 0; j <= d; ++j)
        if (phi[j] != 0) v[i - d + j] -= c * Rational(phi[j]);
    }
    v.resize(d, Rational(0));
    return v;
  }

  long long L_;
  std::vector<Rational> c_;
};

}  // namespace qmaass
