#pragma once

// q-Pochhammer symbols, Gaussian binomials and the even/odd averaged sum used
// for conditionally convergent q-series.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include "qmaass/detail/dense.hpp"
#include "qmaass/qseries.hpp"

namespace qmaass {

/// (a; q^step)_n with a = sign * q^shift, i.e. prod_{k<n} (1 - sign q^{shift + step k}).
struct PochSpec {
  int sign = 1;  // +1 for a = q^shift, -1 for a = -q^shift
  long long shift = 1;
  long long step = 1;

  static PochSpec q() { return {1, 1, 1}; }          // (q)_n
  static PochSpec q2q2() { return {1, 2, 2}; }       // (q^2;q^2)_n
  static PochSpec minus_q() { return {-1, 1, 1}; }   // (-q)_n
  static PochSpec minus_one() { return {-1, 0, 1}; } // (-1)_n
  static PochSpec q_q2() { return {1, 1, 2}; }       // (q;q^2)_n
  static PochSpec monomial(int sign, long long j, long long step = 1) { return {sign, j, step}; }
};

/// Dense coefficients of the Pochhammer product modulo q^cap (shift >= 0 only).
inline detail::Dense<BigInt> pochhammer_dense(const PochSpec& p, long long n, std::size_t cap) {
  if (n < 0) throw std::invalid_argument("pochhammer length must be >= 0");
  if (p.step < 1 || p.shift < 0 || (p.sign != 1 && p.sign != -1))
    throw std::invalid_argument("unsupported Pochhammer specialization");
  detail::Dense<BigInt> a;
  if (cap == 0) return a;
  a.assign(1, BigInt(1));
  const BigInt s(p.sign);
  for (long long k = 0; k < n; ++k) {
    const long long e = p.shift + p.step * k;
    if (e == 0) {
      a[0] *= 1 - s;
      if (a[0] == 0) return {};
      continue;
    }
    if (static_cast<std::size_t>(e) >= cap) break;  // remaining factors are 1 mod q^cap
    detail::mul_one_minus(a, s, static_cast<std::size_t>(e), cap);
  }
  detail::trim(a);
  return a;
}

/// (a; q^step)_n as a series; exact when trunc is absent. Negative shifts give
/// Laurent polynomials.
inline ZSeries pochhammer(const PochSpec& p, long long n, Trunc trunc = std::nullopt) {
  if (n < 0) throw std::invalid_argument("pochhammer length must be >= 0");
  if (p.step < 1 || (p.sign != 1 && p.sign != -1)) throw std::invalid_argument("unsupported Pochhammer specialization");
  if (p.shift < 0) {
    // factor out the negative-exponent factors: 1 - s q^{-e} = -s q^{-e} (1 - s q^{e})
    ZSeries acc = ZSeries::one();
    for (long long k = 0; k < n; ++k) {
      const long long e = p.shift + p.step * k;
      acc = acc * ZSeries::from_terms(1, {{0, BigInt(1)}, {e, BigInt(-p.sign)}});
    }
    return acc.with_trunc(trunc);
  }
  long long deg = 0;
  for (long long k = 0; k < n; ++k) deg += p.shift + p.step * k;
  const std::size_t cap = static_cast<std::size_t>(int_cap(trunc, deg + 1));
  return ZSeries::from_dense(pochhammer_dense(p, n, cap), 0, 1, trunc);
}

/// Gaussian binomial [n choose k] modulo q^cap, cached per thread.
inline const detail::Dense<BigInt>& gaussian_binomial_dense(long long n, long long k, std::size_t cap) {
  static const detail::Dense<BigInt> empty;
  if (k < 0 || n < 0 || k > n || cap == 0) return empty;
  k = std::min(k, n - k);
  const long long deg = k * (n - k);
  const std::size_t len = std::min<std::size_t>(cap, static_cast<std::size_t>(deg) + 1);
  thread_local std::map<std::tuple<long long, long long, std::size_t>, detail::Dense<BigInt>> cache;
  auto key = std::make_tuple(n, k, len);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  detail::Dense<BigInt> a(len, BigInt(0));
  a[0] = 1;
  const BigInt one(1);
  for (long long i = 1; i <= k; ++i) {
    // multiply by (1 - q^{n-k+i}) and divide by (1 - q^i), modulo q^len
    const std::size_t e = static_cast<std::size_t>(n - k + i);
    for (std::size_t j = len; j-- > e;)
      if (a[j - e] != 0) a[j] -= a[j - e];
    detail::div_one_minus(a, static_cast<std::size_t>(i));
  }
  detail::trim(a);
  return cache.emplace(key, std::move(a)).first->second;
}

/// [n choose k]_q; zero outside 0 <= k <= n (including negative n).
inline ZSeries gaussian_binomial(long long n, long long k, Trunc trunc = std::nullopt) {
  if (k < 0 || n < 0 || k > n) return ZSeries::zero(trunc);
  const long long kk = std::min(k, n - k);
  const std::size_t cap = static_cast<std::size_t>(int_cap(trunc, kk * (n - kk) + 1));
  return ZSeries::from_dense(gaussian_binomial_dense(n, k, cap), 0, 1, trunc);
}

/// Raised when an averaged sum does not settle within the allowed number of terms.
struct StabilizationError : std::runtime_error {
  StabilizationError(const std::string& what, Rational exponent, long long terms)
      : std::runtime_error(what), first_unstable_exponent(std::move(exponent)), terms_used(terms) {}
  Rational first_unstable_exponent;
  long long terms_used;
};

/// Lower bound on ord(A_{m'+1} - A_{m'}) valid for all m' >= m, where
/// A_m = (S_{2m} + S_{2m+1}) / 2 are the averaged partial sums.
using TailBound = std::function<Rational(long long m)>;

/// Terms t_n = (-1)^n u_n with ord(u_{n+1} - u_n) >= n + 1 - s.
inline TailBound alternating_tail(long long s) {
  return [s](long long m) { return Rational(2 * m + 2 - s); };
}

/// Terms whose own order is at least f(n), f nondecreasing (absolutely convergent case).
inline TailBound term_order_tail(std::function<Rational(long long)> f) {
  return [f = std::move(f)](long long m) { return f(2 * m + 1); };
}

/// Limit of the averaged partial sums (S_{2m} + S_{2m+1})/2 below trunc.
/// Stops at the first m whose tail bound reaches trunc; every observed
/// increment is checked against the bound, so a wrong bound is reported
/// instead of silently producing a wrong series.
template <class R>
QSeries<R> stabilized_sum(const std::function<QSeries<R>(long long)>& term, const Rational& trunc, long long n_bound,
                          const TailBound& tail) {
  using Traits = ring_traits<R>;
  QSeries<R> S = QSeries<R>::zero(trunc);
  std::optional<QSeries<R>> prev;
  for (long long m = 0;; ++m) {
    if (2 * m + 1 >= n_bound) {
      Rational e = prev ? prev->order().value_or(trunc) : Rational(0);
      throw StabilizationError("averaged sum did not stabilize within " + std::to_string(n_bound) + " terms", e,
                               2 * m);
    }
    QSeries<R> even = (S + term(2 * m)).with_trunc(trunc);
    QSeries<R> odd_term = term(2 * m + 1).with_trunc(trunc);
    QSeries<R> half;
    {
      std::vector<typename QSeries<R>::Term> t;
      for (const auto& [e, c] : odd_term.terms()) t.emplace_back(e, Traits::divide_exact(c, 2));
      half = QSeries<R>::from_terms(odd_term.denom(), std::move(t), odd_term.trunc());
    }
    QSeries<R> A = even + half;
    if (prev) {
      QSeries<R> inc = A - *prev;
      const Rational bound = tail(m - 1);
      if (auto o = inc.order(); o && *o < bound)
        throw StabilizationError("averaged sum violates its tail bound", *o, 2 * m + 2);
    }
    if (tail(m) >= trunc) return A;
    S = even + odd_term;
    prev = std::move(A);
  }
}

}  // namespace qmaass
