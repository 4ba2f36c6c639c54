#pragma once

// Truncated formal q-series sum_m c_m q^{m/D} with exact coefficients.
// A series carries a truncation point T: every exponent >= T is unknown and
// dropped. T may be absent, in which case the series is an exact (Laurent)
// polynomial.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmaass/ring.hpp"

namespace qmaass {

/// Truncation point; std::nullopt means exact.
using Trunc = std::optional<Rational>;

inline Trunc min_trunc(const Trunc& a, const Trunc& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

inline bool below(const Rational& e, const Trunc& t) { return !t || e < *t; }

/// Number of integer exponents e >= 0 with e < t, i.e. max(0, ceil(t)); for
/// exact inputs the caller supplies its own degree bound.
inline long long int_cap(const Trunc& t, long long exact_bound) {
  if (!t) return exact_bound;
  BigInt c = ceil_of(*t);
  return c < 0 ? 0 : to_ll(c);
}

template <class R>
class QSeries {
 public:
  using Traits = ring_traits<R>;
  using Term = std::pair<long long, R>;

  QSeries() = default;

  static QSeries zero(Trunc t = std::nullopt) {
    QSeries s;
    s.trunc_ = t;
    return s;
  }
  static QSeries constant(const R& c, Trunc t = std::nullopt) { return monomial(c, Rational(0), t); }
  static QSeries one(Trunc t = std::nullopt) { return constant(Traits::from_int(1), t); }

  /// c q^e.
  static QSeries monomial(const R& c, const Rational& e, Trunc t = std::nullopt) {
    long long D = to_ll(denominator(e));
    return from_terms(D, {{to_ll(numerator(e)), c}}, t);
  }

  /// Terms may be unsorted and contain repeated exponents; they are merged.
  static QSeries from_terms(long long D, std::vector<Term> terms, Trunc t = std::nullopt) {
    if (D < 1) throw std::invalid_argument("series denominator must be positive");
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    QSeries s;
    s.D_ = D;
    s.trunc_ = t;
    for (auto& tm : terms) {
      if (!s.terms_.empty() && s.terms_.back().first == tm.first)
        s.terms_.back().second += tm.second;
      else
        s.terms_.push_back(std::move(tm));
    }
    s.normalize();
    return s;
  }

  /// Coefficients keyed by exact rational exponent.
  static QSeries from_map(const std::map<Rational, R>& m, Trunc t = std::nullopt) {
    long long D = 1;
    for (const auto& [e, c] : m) D = std::lcm(D, to_ll(denominator(e)));
    std::vector<Term> terms;
    terms.reserve(m.size());
    for (const auto& [e, c] : m) terms.emplace_back(to_ll(e * Rational(D)), c);
    return from_terms(D, std::move(terms), t);
  }

  /// c[i] is the coefficient of q^{(offset + i)/D}.
  static QSeries from_dense(const std::vector<R>& c, long long offset = 0, long long D = 1, Trunc t = std::nullopt) {
    QSeries s;
    s.D_ = D;
    s.trunc_ = t;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!Traits::is_zero(c[i])) s.terms_.emplace_back(offset + static_cast<long long>(i), c[i]);
    s.normalize();
    return s;
  }

  long long denom() const { return D_; }
  const Trunc& trunc() const { return trunc_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational exponent(const Term& t) const { return make_rational(t.first, D_); }

  std::optional<Rational> order() const {
    if (terms_.empty()) return std::nullopt;
    return exponent(terms_.front());
  }

  /// Lowest exponent, or the truncation point when the series is zero (or +inf as nullopt).
  std::optional<Rational> order_or_trunc() const {
    if (!terms_.empty()) return exponent(terms_.front());
    return trunc_;
  }

  R coeff(const Rational& e) const {
    Rational m = e * Rational(D_);
    if (!is_integer(m)) return Traits::from_int(0);
    long long k = to_ll(numerator(m));
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, long long v) { return t.first < v; });
    if (it != terms_.end() && it->first == k) return it->second;
    return Traits::from_int(0);
  }
  R coeff(long long e) const { return coeff(Rational(e)); }

  /// Coefficients of q^0 .. q^{count-1}; requires integral exponents.
  std::vector<R> dense(long long count) const {
    if (D_ != 1) throw std::domain_error("dense view requires integral exponents");
    std::vector<R> out(static_cast<std::size_t>(std::max(0LL, count)), Traits::from_int(0));
    for (const auto& [m, c] : terms_)
      if (m >= 0 && m < count) out[static_cast<std::size_t>(m)] = c;
    return out;
  }

  /// Same series with truncation min(trunc, t).
  QSeries with_trunc(const Trunc& t) const {
    QSeries s = *this;
    s.trunc_ = min_trunc(trunc_, t);
    s.normalize();
    return s;
  }

  /// q^e times the series; the truncation point moves with it.
  QSeries shifted(const Rational& e) const {
    long long ed = to_ll(denominator(e));
    long long L = std::lcm(D_, ed);
    long long sh = to_ll(numerator(e)) * (L / ed);
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& [m, c] : terms_) t.emplace_back(m * (L / D_) + sh, c);
    Trunc nt = trunc_ ? Trunc(*trunc_ + e) : std::nullopt;
    return from_terms(L, std::move(t), nt);
  }

  QSeries operator-() const {
    QSeries s = *this;
    for (auto& [m, c] : s.terms_) c = -c;
    return s;
  }

  QSeries scaled(const R& k) const {
    QSeries s = *this;
    for (auto& [m, c] : s.terms_) c = c * k;
    s.normalize();
    return s;
  }

  friend QSeries operator+(const QSeries& x, const QSeries& y) {
    long long L = std::lcm(x.D_, y.D_);
    std::vector<Term> t;
    t.reserve(x.terms_.size() + y.terms_.size());
    for (const auto& [m, c] : x.terms_) t.emplace_back(m * (L / x.D_), c);
    for (const auto& [m, c] : y.terms_) t.emplace_back(m * (L / y.D_), c);
    return from_terms(L, std::move(t), min_trunc(x.trunc_, y.trunc_));
  }
  friend QSeries operator-(const QSeries& x, const QSeries& y) { return x + (-y); }
  QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
  QSeries& operator-=(const QSeries& o) { return *this = *this - o; }

  /// Truncated Cauchy product. A factor known below T_x with lowest exponent
  /// o_x contributes uncertainty from T_x + min(0, o_y) upwards.
  friend QSeries operator*(const QSeries& x, const QSeries& y) {
    Trunc t;
    auto ox = x.order_or_trunc(), oy = y.order_or_trunc();
    if (x.trunc_) t = min_trunc(t, *x.trunc_ + std::min(Rational(0), oy.value_or(Rational(0))));
    if (y.trunc_) t = min_trunc(t, *y.trunc_ + std::min(Rational(0), ox.value_or(Rational(0))));
    long long L = std::lcm(x.D_, y.D_);
    if (x.terms_.empty() || y.terms_.empty()) return zero(t);
    const long long sx = L / x.D_, sy = L / y.D_;
    // m/L < t  <=>  m < ceil(t L)
    long long lim = std::numeric_limits<long long>::max();
    if (t) lim = to_ll(ceil_of(*t * Rational(L)));
    const long long lo = x.terms_.front().first * sx + y.terms_.front().first * sy;
    const long long hi = std::min(lim - 1, x.terms_.back().first * sx + y.terms_.back().first * sy);
    if (hi < lo) return zero(t);
    const std::size_t span = static_cast<std::size_t>(hi - lo + 1);
    const std::size_t work = x.terms_.size() * y.terms_.size();
    QSeries s;
    s.D_ = L;
    s.trunc_ = t;
    if (span <= 8 * work + 4096) {
      std::vector<R> acc(span, Traits::from_int(0));
      std::vector<char> used(span, 0);
      for (const auto& [mx, cx] : x.terms_) {
        const long long bx = mx * sx;
        for (const auto& [my, cy] : y.terms_) {
          const long long m = bx + my * sy;
          if (m >= lim) break;
          const std::size_t i = static_cast<std::size_t>(m - lo);
          acc[i] += cx * cy;
          used[i] = 1;
        }
      }
      for (std::size_t i = 0; i < span; ++i)
        if (used[i] && !Traits::is_zero(acc[i])) s.terms_.emplace_back(lo + static_cast<long long>(i), std::move(acc[i]));
    } else {
      std::map<long long, R> acc;
      for (const auto& [mx, cx] : x.terms_) {
        const long long bx = mx * sx;
        for (const auto& [my, cy] : y.terms_) {
          const long long m = bx + my * sy;
          if (m >= lim) break;
          auto [it, fresh] = acc.try_emplace(m, cx * cy);
          if (!fresh) it->second += cx * cy;
        }
      }
      for (auto& [m, c] : acc)
        if (!Traits::is_zero(c)) s.terms_.emplace_back(m, std::move(c));
    }
    s.normalize();
    return s;
  }
  QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

  friend bool operator==(const QSeries& x, const QSeries& y) {
    if (x.trunc_ != y.trunc_ || x.D_ != y.D_ || x.terms_.size() != y.terms_.size()) return false;
    for (std::size_t i = 0; i < x.terms_.size(); ++i)
      if (x.terms_[i].first != y.terms_[i].first || !Traits::is_zero(x.terms_[i].second - y.terms_[i].second))
        return false;
    return true;
  }

  /// Multiplicative inverse. The lowest coefficient must be a unit. The result
  /// is known below min(T_x - 2 o_x, t); at least one of them must be finite.
  QSeries inverse(Trunc t = std::nullopt) const {
    if (terms_.empty()) throw std::domain_error("inverse of a zero series");
    const auto& [m0, c0] = terms_.front();
    if (!Traits::is_unit(c0)) throw std::domain_error("leading coefficient is not a unit");
    const Rational e0 = exponent(terms_.front());
    Trunc rt = t;
    if (trunc_) rt = min_trunc(rt, *trunc_ - 2 * e0);
    if (!rt) throw std::invalid_argument("inverse of an exact polynomial needs a truncation point");
    // y = sum_n v_n q^{(n - m0)/D}; count numerators n with (n - m0)/D < rt.
    const long long count = to_ll(ceil_of(*rt * Rational(D_))) + m0;
    QSeries s;
    s.D_ = D_;
    s.trunc_ = rt;
    if (count <= 0) return s;
    const R inv0 = Traits::inverse(c0);
    std::vector<R> v(static_cast<std::size_t>(count), Traits::from_int(0));
    v[0] = inv0;
    for (long long n = 1; n < count; ++n) {
      R acc = Traits::from_int(0);
      for (std::size_t i = 1; i < terms_.size(); ++i) {
        long long d = terms_[i].first - m0;
        if (d > n) break;
        const R& vv = v[static_cast<std::size_t>(n - d)];
        if (!Traits::is_zero(vv)) acc += terms_[i].second * vv;
      }
      v[static_cast<std::size_t>(n)] = -(acc * inv0);
    }
    for (long long n = 0; n < count; ++n)
      if (!Traits::is_zero(v[static_cast<std::size_t>(n)])) s.terms_.emplace_back(n - m0, std::move(v[static_cast<std::size_t>(n)]));
    s.normalize();
    return s;
  }

  /// Substitution q -> q^c for rational c > 0.
  QSeries compose_power(const Rational& c) const {
    if (c <= 0) throw std::invalid_argument("compose_power requires a positive exponent");
    const long long p = to_ll(numerator(c)), q = to_ll(denominator(c));
    std::vector<Term> t;
    t.reserve(terms_.size());
    for (const auto& [m, co] : terms_) t.emplace_back(m * p, co);
    Trunc nt = trunc_ ? Trunc(*trunc_ * c) : std::nullopt;
    return from_terms(D_ * q, std::move(t), nt);
  }

  /// Substitution q -> -q; only defined when every exponent is an integer.
  QSeries negate_variable() const {
    if (D_ != 1) throw std::domain_error("q -> -q needs integral exponents");
    QSeries s = *this;
    for (auto& [m, c] : s.terms_)
      if (m % 2 != 0) c = -c;
    return s;
  }

  /// Value at q^{1/D} = zeta_{N D}^h, i.e. sum c_m zeta_{ND}^{h m}. Terms at or
  /// above the truncation point are not included.
  CycNumber eval_root(long long N, long long h = 1) const {
    if (N < 1) throw std::invalid_argument("root order must be positive");
    const long long L = N * D_;
    auto idx = [&](long long m) {
      long long e = (h % L) * (m % L) % L;
      return static_cast<std::size_t>(e < 0 ? e + L : e);
    };
    if constexpr (std::is_same_v<R, CycNumber>) {
      CycNumber acc(Rational(0), L);
      for (const auto& [m, c] : terms_) acc += c * CycNumber::root(L, static_cast<long long>(idx(m)));
      return acc;
    } else {
      std::vector<Rational> v(static_cast<std::size_t>(L), Rational(0));
      for (const auto& [m, c] : terms_) v[idx(m)] += Traits::to_rational(c);
      return CycNumber::from_powers(L, std::move(v));
    }
  }

  /// Coefficient-wise conversion to another ring.
  template <class S, class F>
  QSeries<S> map_coeffs(F f) const {
    std::vector<typename QSeries<S>::Term> t;
    t.reserve(terms_.size());
    for (const auto& [m, c] : terms_) t.emplace_back(m, f(c));
    return QSeries<S>::from_terms(D_, std::move(t), trunc_);
  }

 private:
  void normalize() {
    std::erase_if(terms_, [](const Term& t) { return Traits::is_zero(t.second); });
    if (trunc_) {
      const long long lim = to_ll(ceil_of(*trunc_ * Rational(D_)));
      while (!terms_.empty() && terms_.back().first >= lim) terms_.pop_back();
    }
    long long g = D_;
    for (const auto& t : terms_) {
      g = std::gcd(g, t.first);
      if (g == 1) break;
    }
    if (terms_.empty()) g = D_;
    if (g > 1) {
      D_ /= g;
      for (auto& t : terms_) t.first /= g;
    }
  }

  long long D_ = 1;
  Trunc trunc_;
  std::vector<Term> terms_;
};

using ZSeries = QSeries<BigInt>;
using QQSeries = QSeries<Rational>;
using CycSeries = QSeries<CycNumber>;

/// Exact conversion from integer to rational coefficients.
inline QQSeries to_rational_series(const ZSeries& s) {
  return s.map_coeffs<Rational>([](const BigInt& c) { return Rational(c); });
}

/// Conversion to integers; throws when a coefficient is not integral.
inline ZSeries to_integer_series(const QQSeries& s) {
  return s.map_coeffs<BigInt>([](const Rational& c) {
    if (!is_integer(c)) throw std::domain_error("coefficient is not an integer");
    return numerator(c);
  });
}

}  // namespace qmaass
