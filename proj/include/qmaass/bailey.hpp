#pragma once

// Bailey pairs relative to 1 and q, the two explicit pairs built from H_n, and
// truncated verification of the limiting forms of Bailey's lemma.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaass/hpoly.hpp"

namespace qmaass {

enum class Relative { one, q };

inline const char* to_string(Relative r) { return r == Relative::one ? "1" : "q"; }

/// A pair (alpha_n, beta_n). alpha_n is an exact polynomial in q with
/// nonnegative exponents; beta_n is requested below a truncation point.
struct BaileyPair {
  Relative relative = Relative::q;
  std::function<ZSeries(long long)> alpha;
  std::function<ZSeries(long long, const Rational&)> beta;
  /// ord alpha_n >= alpha_order_lb(n); must be nondecreasing in n.
  std::function<long long(long long)> alpha_order_lb;
  /// alpha_n = 0 for n >= alpha_support_end, when set.
  std::optional<long long> alpha_support_end;
  /// ord beta_n >= 0 and ord(beta_{n+1} - beta_n) >= n + 1 - beta_tail_shift.
  long long beta_tail_shift = 0;
  std::string label;
};

namespace detail {

inline long long bailey_nu_exponent(long long k, long long l, long long nu) {
  const long long twice = (2 * k + 1) * nu * nu + (2 * k - 2 * l + 1) * nu;
  if (twice % 2 != 0) throw std::logic_error("half-integral exponent in Bailey pair");
  return twice / 2;
}

/// 1 / prod_{i < len} (1 - q^{start + i}) modulo q^cap.
inline Dense<BigInt> inverse_poch(long long start, long long len, std::size_t cap) {
  Dense<BigInt> a(cap, BigInt(0));
  if (cap == 0) return a;
  a[0] = 1;
  for (long long i = 0; i < len; ++i) div_one_minus(a, static_cast<std::size_t>(start + i));
  return a;
}

inline Dense<BigInt> to_dense_nonneg(const ZSeries& s, std::size_t cap) {
  if (s.denom() != 1) throw std::invalid_argument("expected integral exponents");
  if (auto o = s.order(); o && *o < 0) throw std::invalid_argument("expected nonnegative exponents");
  return s.dense(static_cast<long long>(cap));
}

inline std::size_t bailey_cap(const Rational& trunc) {
  return trunc <= 0 ? 0 : static_cast<std::size_t>(to_ll(ceil_of(trunc)));
}

}  // namespace detail

/// beta_n = sum_{k <= n} alpha_k / ((q)_{n-k} (aq)_{n+k}) below trunc.
inline ZSeries bailey_beta_from_alpha(const std::function<ZSeries(long long)>& alpha, Relative rel, long long n,
                                      const Rational& trunc, std::optional<long long> support_end = std::nullopt) {
  const std::size_t cap = detail::bailey_cap(trunc);
  detail::Dense<BigInt> acc(cap, BigInt(0));
  const long long a_shift = rel == Relative::one ? 1 : 2;
  const long long kmax = support_end ? std::min(n, *support_end - 1) : n;
  for (long long k = 0; k <= kmax; ++k) {
    const ZSeries a = alpha(k);
    if (a.is_zero()) continue;
    auto d = detail::mul(detail::to_dense_nonneg(a, cap), detail::inverse_poch(1, n - k, cap), cap);
    d = detail::mul(d, detail::inverse_poch(a_shift, n + k, cap), cap);
    detail::add_shifted(acc, d, 0, BigInt(1), cap);
  }
  return ZSeries::from_dense(acc, 0, 1, trunc);
}

/// alpha_n = -q^{(k+1)n^2 - n}(1 - q^{2n}) sum_{nu=-n}^{n-1} (-1)^nu q^{-P(nu)},
/// beta_n = H_n(k,l;1;q) for n >= 1 and beta_0 = 0, relative to 1.
inline BaileyPair pair_relative_one(long long k, long long l) {
  HParams{k, l, 1, 0}.validate();
  BaileyPair p;
  p.relative = Relative::one;
  p.label = "H_n(k,l;1) relative to 1";
  p.alpha = [k, l](long long n) {
    if (n == 0) return ZSeries::zero();
    std::vector<ZSeries::Term> t;
    const long long base = (k + 1) * n * n - n;
    for (long long nu = -n; nu <= n - 1; ++nu) {
      const long long e = base - detail::bailey_nu_exponent(k, l, nu);
      const BigInt s(nu % 2 == 0 ? -1 : 1);
      t.emplace_back(e, s);
      t.emplace_back(e + 2 * n, -s);
    }
    return ZSeries::from_terms(1, std::move(t));
  };
  p.beta = [k, l](long long n, const Rational& trunc) {
    if (n == 0) return ZSeries::zero(trunc);
    return hpoly({k, l, 1, n}, trunc);
  };
  // the largest subtracted exponent on [-n, n-1] is at most ((2k+1)n^2 - n)/2
  p.alpha_order_lb = [](long long n) { return n * (n - 1) / 2; };
  p.beta_tail_shift = 0;
  return p;
}

/// alpha_n = (1 - q^{2n+1})/(1 - q) q^{(k+1)n^2 + kn} sum_{|nu| <= n} (-1)^nu q^{-P(nu)},
/// beta_n = H_n(k,l;0;q), relative to q.
inline BaileyPair pair_relative_q(long long k, long long l) {
  HParams{k, l, 0, 0}.validate();
  BaileyPair p;
  p.relative = Relative::q;
  p.label = "H_n(k,l;0) relative to q";
  p.alpha = [k, l](long long n) {
    std::vector<ZSeries::Term> t;
    const long long base = (k + 1) * n * n + k * n;
    for (long long nu = -n; nu <= n; ++nu) {
      const long long e = base - detail::bailey_nu_exponent(k, l, nu);
      const BigInt s(nu % 2 == 0 ? 1 : -1);
      // (1 - q^{2n+1})/(1 - q) = 1 + q + ... + q^{2n}
      for (long long i = 0; i <= 2 * n; ++i) t.emplace_back(e + i, s);
    }
    return ZSeries::from_terms(1, std::move(t));
  };
  p.beta = [k, l](long long n, const Rational& trunc) { return hpoly({k, l, 0, n}, trunc); };
  p.alpha_order_lb = [](long long n) { return n * (n + 1) / 2; };
  p.beta_tail_shift = 0;
  return p;
}

/// Pair with the given finitely supported alpha and beta from the definition.
/// alpha_n = 0 for n >= alphas.size().
inline BaileyPair synthetic_pair(Relative rel, std::vector<ZSeries> alphas, std::string label = "synthetic") {
  for (const auto& a : alphas) detail::to_dense_nonneg(a, 1);
  BaileyPair p;
  p.relative = rel;
  p.label = std::move(label);
  const long long end = static_cast<long long>(alphas.size());
  auto shared = std::make_shared<const std::vector<ZSeries>>(std::move(alphas));
  p.alpha = [shared](long long n) {
    return n >= 0 && n < static_cast<long long>(shared->size()) ? (*shared)[static_cast<std::size_t>(n)] : ZSeries::zero();
  };
  p.alpha_support_end = end;
  p.alpha_order_lb = [](long long) { return 0LL; };
  auto alpha = p.alpha;
  p.beta = [alpha, rel, end](long long n, const Rational& trunc) {
    return bailey_beta_from_alpha(alpha, rel, n, trunc, end);
  };
  // beta_{n+1} - beta_n only involves 1/(q)_{n+1-k} - 1/(q)_{n-k} and the
  // (aq)_{n+k} tail, both of order >= n + 1 - k for k < end
  p.beta_tail_shift = std::max(0LL, end - 1);
  return p;
}

/// Random synthetic pair: alpha_n for n < support is a random integer
/// polynomial of degree < 4 with coefficients in [-3, 3]. Relative-1 pairs get
/// alpha_0 = 0, which the relative-1 limiting identities require.
inline BaileyPair random_synthetic_pair(Relative rel, std::uint64_t seed, long long support = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<ZSeries> alphas;
  for (long long n = 0; n < support; ++n) {
    std::vector<ZSeries::Term> t;
    if (!(rel == Relative::one && n == 0))
      for (long long e = 0; e < 4; ++e) t.emplace_back(e, BigInt(coef(rng)));
    alphas.push_back(ZSeries::from_terms(1, std::move(t)));
  }
  return synthetic_pair(rel, std::move(alphas), "random seed " + std::to_string(seed));
}

/// Checks beta_n against the defining sum for n <= n_max below trunc.
inline VerificationReport verify_pair(const BaileyPair& p, long long n_max, const Rational& trunc) {
  nlohmann::json params = {{"pair", p.label}, {"relative", to_string(p.relative)}, {"n_max", n_max},
                           {"trunc", to_string(trunc)}};
  for (long long n = 0; n <= n_max; ++n) {
    const ZSeries b = p.beta(n, trunc);
    const ZSeries d = bailey_beta_from_alpha(p.alpha, p.relative, n, trunc, p.alpha_support_end);
    auto r = compare_series("bailey_pair", params, b, d, trunc);
    if (!r.pass) {
      r.details["n"] = n;
      return r;
    }
  }
  VerificationReport ok;
  ok.check = "bailey_pair";
  ok.params = params;
  return ok;
}

/// The four limiting identities, named after the specialization (a, rho_2)
/// that produces them (a = 1 uses the derivative at rho_1 = 1, a = q uses rho_1 = q).
enum class LimitingIdentity { one_infinite, one_minus_one, q_infinite, q_minus_q };

inline const char* to_string(LimitingIdentity w) {
  switch (w) {
    case LimitingIdentity::one_infinite: return "a=1,rho2->inf";
    case LimitingIdentity::one_minus_one: return "a=1,rho2=-1";
    case LimitingIdentity::q_infinite: return "a=q,rho2->inf";
    case LimitingIdentity::q_minus_q: return "a=q,rho2=-q";
  }
  return "?";
}

inline Relative required_relative(LimitingIdentity w) {
  return w == LimitingIdentity::one_infinite || w == LimitingIdentity::one_minus_one ? Relative::one : Relative::q;
}

namespace detail {

/// Sums term(n) over n >= n0 below q^cap; term weights w(n) + alpha_order_lb(n)
/// are nondecreasing for the identities used here, so the first n reaching cap ends the sum.
inline Dense<BigInt> bailey_alpha_side(const BaileyPair& p, long long n0, const std::function<long long(long long)>& weight,
                                       const std::function<Dense<BigInt>(long long, std::size_t)>& term, std::size_t cap) {
  Dense<BigInt> acc(cap, BigInt(0));
  const long long T = static_cast<long long>(cap);
  for (long long n = n0;; ++n) {
    if (p.alpha_support_end && n >= *p.alpha_support_end) break;
    const long long w = weight(n);
    if (w + p.alpha_order_lb(n) >= T) break;
    const std::size_t room = static_cast<std::size_t>(T - w);
    add_shifted(acc, term(n, room), static_cast<std::size_t>(w), BigInt(n % 2 == 0 ? 1 : -1), cap);
  }
  return acc;
}

}  // namespace detail

/// Expands both sides of a limiting identity below trunc and compares them.
inline VerificationReport verify_limiting_identity(const BaileyPair& p, LimitingIdentity which, const Rational& trunc) {
  if (p.relative != required_relative(which))
    throw std::invalid_argument(std::string("identity ") + to_string(which) + " needs a pair relative to " +
                                to_string(required_relative(which)));
  nlohmann::json params = {{"pair", p.label}, {"identity", to_string(which)}, {"trunc", to_string(trunc)}};
  const std::size_t cap = detail::bailey_cap(trunc);
  const long long T = static_cast<long long>(cap);
  auto alpha_d = [&](long long n, std::size_t room) { return detail::to_dense_nonneg(p.alpha(n), room); };
  auto beta_d = [&](long long n, std::size_t room) {
    return p.beta(n, Rational(static_cast<long long>(room))).dense(static_cast<long long>(room));
  };
  QQSeries lhs, rhs;
  switch (which) {
    case LimitingIdentity::one_infinite: {
      // sum_{n>=1} (-1)^n (q)_{n-1} q^{C(n+1,2)} beta_n = sum_{n>=1} (-1)^n q^{C(n+1,2)} alpha_n / (1 - q^n)
      detail::Dense<BigInt> l(cap, BigInt(0));
      for (long long n = 1; n * (n + 1) / 2 < T; ++n) {
        const std::size_t room = static_cast<std::size_t>(T - n * (n + 1) / 2);
        auto t = detail::mul(pochhammer_dense(PochSpec::q(), n - 1, room), beta_d(n, room), room);
        detail::add_shifted(l, t, static_cast<std::size_t>(n * (n + 1) / 2), BigInt(n % 2 ? -1 : 1), cap);
      }
      auto r = detail::bailey_alpha_side(
          p, 1, [](long long n) { return n * (n + 1) / 2; },
          [&](long long n, std::size_t room) {
            auto a = alpha_d(n, room);
            a.resize(room, BigInt(0));
            detail::div_one_minus(a, static_cast<std::size_t>(n));
            return a;
          },
          cap);
      lhs = to_rational_series(ZSeries::from_dense(l, 0, 1, trunc));
      rhs = to_rational_series(ZSeries::from_dense(r, 0, 1, trunc));
      break;
    }
    case LimitingIdentity::one_minus_one: {
      // sum_{n>=1} (q^2;q^2)_{n-1} (-q)^n beta_n = sum_{n>=1} (-q)^n alpha_n / (1 - q^{2n})
      detail::Dense<BigInt> l(cap, BigInt(0));
      for (long long n = 1; n < T; ++n) {
        const std::size_t room = static_cast<std::size_t>(T - n);
        auto t = detail::mul(pochhammer_dense(PochSpec::q2q2(), n - 1, room), beta_d(n, room), room);
        detail::add_shifted(l, t, static_cast<std::size_t>(n), BigInt(n % 2 ? -1 : 1), cap);
      }
      auto r = detail::bailey_alpha_side(
          p, 1, [](long long n) { return n; },
          [&](long long n, std::size_t room) {
            auto a = alpha_d(n, room);
            a.resize(room, BigInt(0));
            detail::div_one_minus(a, static_cast<std::size_t>(2 * n));
            return a;
          },
          cap);
      lhs = to_rational_series(ZSeries::from_dense(l, 0, 1, trunc));
      rhs = to_rational_series(ZSeries::from_dense(r, 0, 1, trunc));
      break;
    }
    case LimitingIdentity::q_infinite: {
      // sum_{n>=0} (-1)^n (q)_n q^{C(n+1,2)} beta_n = (1 - q) sum_{n>=0} (-1)^n q^{C(n+1,2)} alpha_n
      detail::Dense<BigInt> l(cap, BigInt(0));
      for (long long n = 0; n * (n + 1) / 2 < T; ++n) {
        const std::size_t room = static_cast<std::size_t>(T - n * (n + 1) / 2);
        auto t = detail::mul(pochhammer_dense(PochSpec::q(), n, room), beta_d(n, room), room);
        detail::add_shifted(l, t, static_cast<std::size_t>(n * (n + 1) / 2), BigInt(n % 2 ? -1 : 1), cap);
      }
      auto r = detail::bailey_alpha_side(p, 0, [](long long n) { return n * (n + 1) / 2; }, alpha_d, cap);
      detail::mul_one_minus(r, BigInt(1), 1, cap);
      lhs = to_rational_series(ZSeries::from_dense(l, 0, 1, trunc));
      rhs = to_rational_series(ZSeries::from_dense(r, 0, 1, trunc));
      break;
    }
    case LimitingIdentity::q_minus_q: {
      // sum_{n>=0} (q^2;q^2)_n (-1)^n beta_n (averaged) = (1 - q)/2 sum_{n>=0} (-1)^n alpha_n
      auto term = [&](long long n) {
        auto t = detail::mul(pochhammer_dense(PochSpec::q2q2(), n, cap), beta_d(n, cap), cap);
        return to_rational_series(ZSeries::from_dense(t, 0, 1, trunc)).scaled(Rational(n % 2 ? -1 : 1));
      };
      lhs = stabilized_sum<Rational>(term, trunc, 4 * T + 4 * p.beta_tail_shift + 16, alternating_tail(p.beta_tail_shift));
      auto r = detail::bailey_alpha_side(p, 0, [](long long) { return 0LL; }, alpha_d, cap);
      detail::mul_one_minus(r, BigInt(1), 1, cap);
      rhs = to_rational_series(ZSeries::from_dense(r, 0, 1, trunc)).scaled(make_rational(1, 2));
      break;
    }
  }
  return compare_series("bailey_limit", params, lhs, rhs, trunc);
}

/// Runs every identity that matches the pair's relative parameter.
inline std::vector<VerificationReport> verify_limiting_identities(const BaileyPair& p, const Rational& trunc) {
  std::vector<VerificationReport> out;
  for (auto w : {LimitingIdentity::one_infinite, LimitingIdentity::one_minus_one, LimitingIdentity::q_infinite,
                 LimitingIdentity::q_minus_q})
    if (required_relative(w) == p.relative) out.push_back(verify_limiting_identity(p, w, trunc));
  return out;
}

/// sum_{u=0}^n (-z)^u q^{C(u,2)} [n choose u] = (z;q)_n as polynomials in z and q.
inline VerificationReport verify_q_binomial_theorem(long long n) {
  // compare coefficients of z^u: (-1)^u q^{C(u,2)} [n,u] against the z^u
  // coefficient of prod_{i<n} (1 - z q^i), built by the recursion over i
  std::vector<ZSeries> prod{ZSeries::one()};
  for (long long i = 0; i < n; ++i) {
    std::vector<ZSeries> next(prod.size() + 1, ZSeries::zero());
    for (std::size_t u = 0; u < prod.size(); ++u) {
      next[u] = next[u] + prod[u];
      next[u + 1] = next[u + 1] - prod[u].shifted(Rational(i));
    }
    prod = std::move(next);
  }
  VerificationReport r;
  r.check = "q_binomial_theorem";
  r.params = {{"n", n}};
  for (long long u = 0; u <= n; ++u) {
    ZSeries lhs = gaussian_binomial(n, u) * ZSeries::monomial(BigInt(u % 2 ? -1 : 1), Rational(u * (u - 1) / 2));
    auto c = compare_series("q_binomial_theorem", r.params, lhs, prod[static_cast<std::size_t>(u)], std::nullopt);
    if (!c.pass) {
      c.details["z_power"] = u;
      return c;
    }
  }
  return r;
}

}  // namespace qmaass
