#pragma once

// The families F_1..F_4, the series sigma and sigma* in their several
// representations, a negative-coefficient lattice series, and the
// Kontsevich-Zagier type functions at roots of unity.

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaass/hpoly.hpp"

namespace qmaass {

struct FamilyId {
  int j = 1;
  long long k = 1;
  long long l = 1;

  void validate() const {
    if (j < 1 || j > 4) throw std::invalid_argument("family index j must be in 1..4");
    if (k < 1) throw std::invalid_argument("family needs k >= 1");
    if (l < 1 || l > k) throw std::invalid_argument("family needs 1 <= l <= k");
  }
  int d() const { return j == 1 || j == 3 ? 1 : 2; }
  nlohmann::json to_json() const { return {{"j", j}, {"k", k}, {"l", l}}; }
};

namespace detail {

inline Dense<BigInt> hpoly_dense(long long k, long long l, int b, long long n, std::size_t cap) {
  if (cap == 0) return {};
  return hpoly({k, l, b, n}, Rational(static_cast<long long>(cap))).dense(static_cast<long long>(cap));
}

/// a /= (1 + q^e) modulo q^{a.size()}.
template <class R>
void div_one_plus(Dense<R>& a, std::size_t e) {
  for (std::size_t i = e; i < a.size(); ++i)
    if (a[i - e] != 0) a[i] -= a[i - e];
}

inline std::size_t cap_of(const Rational& trunc) {
  if (trunc <= 0) return 0;
  return static_cast<std::size_t>(to_ll(ceil_of(trunc)));
}

}  // namespace detail

/// u_n of F_2 with t_n = (-1)^n u_n: (q^2;q^2)_n H_n(k,l;0;q) below q^cap.
inline detail::Dense<BigInt> f2_unsigned_term(long long k, long long l, long long n, std::size_t cap) {
  return detail::mul(pochhammer_dense(PochSpec::q2q2(), n, cap), detail::hpoly_dense(k, l, 0, n, cap), cap);
}

/// F_j(k, l; q) below trunc. F_2 is the limit of the averaged partial sums and
/// has half-integral coefficients, so every family is returned over Q.
inline QQSeries f_series(const FamilyId& id, const Rational& trunc) {
  id.validate();
  const std::size_t cap = detail::cap_of(trunc);
  if (cap == 0) return QQSeries::zero(trunc);
  const long long k = id.k, l = id.l;
  if (id.j == 2) {
    auto term = [&](long long n) {
      auto u = f2_unsigned_term(k, l, n, cap);
      return to_rational_series(ZSeries::from_dense(u, 0, 1, trunc)).scaled(Rational(n % 2 == 0 ? 1 : -1));
    };
    // ord(u_{n+1} - u_n) >= n + 1: both (q^2;q^2)_n and H_n(k,l;0;q) move by O(q^{n+1})
    return stabilized_sum<Rational>(term, trunc, 4 * static_cast<long long>(cap) + 16, alternating_tail(0));
  }
  detail::Dense<BigInt> acc;
  const long long T = static_cast<long long>(cap);
  for (long long n = id.j == 1 ? 0 : 1;; ++n) {
    const long long shift = id.j == 4 ? n : n * (n + 1) / 2;
    if (shift >= T) break;
    const std::size_t room = static_cast<std::size_t>(T - shift);
    const BigInt sign(n % 2 == 0 ? 1 : -1);
    detail::Dense<BigInt> t;
    if (id.j == 1) {
      t = detail::mul(pochhammer_dense(PochSpec::q(), n, room), detail::hpoly_dense(k, l, 0, n, room), room);
    } else {
      t = detail::mul(pochhammer_dense(PochSpec::q(), n - 1, room), detail::hpoly_dense(k, l, 1, n, room), room);
      if (id.j == 4) t = detail::mul(t, pochhammer_dense(PochSpec::minus_one(), n, room), room);
    }
    // (-q)^n = (-1)^n q^n in F_4; the other families carry (-1)^n explicitly
    detail::add_shifted(acc, t, static_cast<std::size_t>(shift), sign, cap);
  }
  return to_rational_series(ZSeries::from_dense(acc, 0, 1, trunc));
}

enum class SigmaRep { pochhammer, alternating, averaged, indefinite };
enum class SigmaStarRep { odd_pochhammer, alternating };

inline const char* to_string(SigmaRep r) {
  switch (r) {
    case SigmaRep::pochhammer: return "pochhammer";
    case SigmaRep::alternating: return "alternating";
    case SigmaRep::averaged: return "averaged";
    case SigmaRep::indefinite: return "indefinite";
  }
  return "?";
}
inline const char* to_string(SigmaStarRep r) { return r == SigmaStarRep::odd_pochhammer ? "odd_pochhammer" : "alternating"; }

/// sigma(q) below trunc in the requested representation.
inline ZSeries sigma_series(SigmaRep rep, const Rational& trunc) {
  const std::size_t cap = detail::cap_of(trunc);
  if (cap == 0) return ZSeries::zero(trunc);
  const long long T = static_cast<long long>(cap);
  detail::Dense<BigInt> acc(cap, BigInt(0));
  switch (rep) {
    case SigmaRep::pochhammer: {
      // sum q^{C(n+1,2)} / (-q)_n
      for (long long n = 0; n * (n + 1) / 2 < T; ++n) {
        const long long s = n * (n + 1) / 2;
        detail::Dense<BigInt> t(static_cast<std::size_t>(T - s), BigInt(0));
        t[0] = 1;
        for (long long i = 1; i <= n; ++i) detail::div_one_plus(t, static_cast<std::size_t>(i));
        detail::add_shifted(acc, t, static_cast<std::size_t>(s), BigInt(1), cap);
      }
      break;
    }
    case SigmaRep::alternating: {
      acc[0] += 1;
      for (long long n = 0; n + 1 < T; ++n) {
        const std::size_t room = static_cast<std::size_t>(T - n - 1);
        detail::add_shifted(acc, pochhammer_dense(PochSpec::q(), n, room), static_cast<std::size_t>(n + 1),
                            BigInt(n % 2 == 0 ? 1 : -1), cap);
      }
      break;
    }
    case SigmaRep::averaged: {
      auto term = [&](long long n) {
        return to_rational_series(ZSeries::from_dense(pochhammer_dense(PochSpec::q(), n, cap), 0, 1, trunc))
            .scaled(Rational(n % 2 == 0 ? 2 : -2));
      };
      return to_integer_series(stabilized_sum<Rational>(term, trunc, 4 * T + 16, alternating_tail(0)));
    }
    case SigmaRep::indefinite: {
      // sum_{n >= 0, |nu| <= n} (-1)^{n+nu} q^{n(3n+1)/2 - nu^2} (1 - q^{2n+1}); the
      // smallest exponent for a given n is n(n+1)/2, at |nu| = n
      for (long long n = 0; n * (n + 1) / 2 < T; ++n)
        for (long long nu = -n; nu <= n; ++nu) {
          const long long e = n * (3 * n + 1) / 2 - nu * nu;
          const int sg = (n + nu) % 2 == 0 ? 1 : -1;
          if (e < T) acc[static_cast<std::size_t>(e)] += sg;
          if (e + 2 * n + 1 < T) acc[static_cast<std::size_t>(e + 2 * n + 1)] -= sg;
        }
      break;
    }
  }
  return ZSeries::from_dense(acc, 0, 1, trunc);
}

/// sigma*(q) below trunc.
inline ZSeries sigma_star_series(SigmaStarRep rep, const Rational& trunc) {
  const std::size_t cap = detail::cap_of(trunc);
  if (cap == 0) return ZSeries::zero(trunc);
  const long long T = static_cast<long long>(cap);
  detail::Dense<BigInt> acc(cap, BigInt(0));
  if (rep == SigmaStarRep::odd_pochhammer) {
    // 2 sum_{n >= 1} (-1)^n q^{n^2} / (q;q^2)_n
    for (long long n = 1; n * n < T; ++n) {
      detail::Dense<BigInt> t(static_cast<std::size_t>(T - n * n), BigInt(0));
      t[0] = 1;
      for (long long i = 0; i < n; ++i) detail::div_one_minus(t, static_cast<std::size_t>(2 * i + 1));
      detail::add_shifted(acc, t, static_cast<std::size_t>(n * n), BigInt(n % 2 == 0 ? 2 : -2), cap);
    }
  } else {
    // -2 sum_{n >= 0} q^{n+1} (q^2;q^2)_n
    for (long long n = 0; n + 1 < T; ++n) {
      const std::size_t room = static_cast<std::size_t>(T - n - 1);
      detail::add_shifted(acc, pochhammer_dense(PochSpec::q2q2(), n, room), static_cast<std::size_t>(n + 1),
                          BigInt(-2), cap);
    }
  }
  return ZSeries::from_dense(acc, 0, 1, trunc);
}

/// Lattice region for the negative-coefficient series.
enum class NegativeRegion {
  printed,  // |(M+1)n + M-1| < 2|(M-1)nu + M-1-2l|, enumerated for |nu| <= nu_cut
  cone      // |2(M+1)n + M-1| < |2(M-1)nu + M-1-2l|, finite below any trunc
};

struct NegativePartOptions {
  NegativeRegion region = NegativeRegion::printed;
  long long nu_cut = 200;
};

struct LatticeAnomaly {
  long long n, nu;
  Rational exponent;
};

struct NegativePartResult {
  ZSeries series;
  std::vector<LatticeAnomaly> anomalies;  // region points with exponent <= 0 (first 256 kept)
  long long anomaly_count = 0;
  long long terms_in_window = 0;
  long long max_abs_nu_in_window = 0;
  /// In-window points with nu_cut/2 < |nu| <= nu_cut (printed region only):
  /// nonzero means the result depends on nu_cut.
  long long terms_beyond_half_cut = 0;
  bool complete = true;  // false when the enumeration is cut rather than exhausted

  nlohmann::json diagnostics_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t i = 0; i < anomalies.size() && i < 20; ++i)
      a.push_back({{"n", anomalies[i].n}, {"nu", anomalies[i].nu}, {"exponent", to_string(anomalies[i].exponent)}});
    return {{"anomaly_count", anomaly_count},
            {"anomalies_first", a},
            {"terms_in_window", terms_in_window},
            {"max_abs_nu_in_window", max_abs_nu_in_window},
            {"terms_beyond_half_cut", terms_beyond_half_cut},
            {"complete", complete}};
  }
};

/// sum (-1)^{n+nu} q^{E(n,nu)} with E = ((M+1)Y^2 - (M-1)X^2) / (8(M+1)(M-1)),
/// X = 2(M+1)n + M-1, Y = 2(M-1)nu + M-1-2l, over the chosen region.
inline NegativePartResult negative_part_series(long long M, long long l, const Rational& trunc,
                                               const NegativePartOptions& opt = {}) {
  if (M < 2) throw std::invalid_argument("negative_part_series needs M >= 2");
  if (l < 1) throw std::invalid_argument("negative_part_series needs l >= 1");
  const long long D = 8 * (M + 1) * (M - 1);
  NegativePartResult res;
  std::map<long long, BigInt> acc;
  auto visit = [&](long long n, long long nu) {
    const BigInt X = BigInt(2 * (M + 1)) * n + (M - 1);
    const BigInt Y = BigInt(2 * (M - 1)) * nu + (M - 1 - 2 * l);
    const BigInt num = BigInt(M + 1) * Y * Y - BigInt(M - 1) * X * X;
    const Rational e = ratio(num, BigInt(D));
    if (num <= 0) {
      if (res.anomalies.size() < 256) res.anomalies.push_back({n, nu, e});
      ++res.anomaly_count;
      return;
    }
    if (e >= trunc) return;
    ++res.terms_in_window;
    res.max_abs_nu_in_window = std::max(res.max_abs_nu_in_window, std::abs(nu));
    if (2 * std::abs(nu) > opt.nu_cut) ++res.terms_beyond_half_cut;
    acc[to_ll(num)] += (n + nu) % 2 == 0 ? 1 : -1;
  };
  long long nu_max = opt.nu_cut;
  if (opt.region == NegativeRegion::cone) {
    // |X| < |Y| gives E > 2Y^2/D, so E < trunc bounds |Y| and then n
    if (trunc <= 0) {
      res.series = ZSeries::zero(trunc);
      return res;
    }
    const double ymax = std::sqrt(to_double(trunc) * static_cast<double>(D) / 2.0) + 2.0;
    nu_max = static_cast<long long>(ymax / (2.0 * static_cast<double>(M - 1))) + 2;
  } else {
    res.complete = false;
  }
  for (long long nu = -nu_max; nu <= nu_max; ++nu) {
    const long long Y = 2 * (M - 1) * nu + M - 1 - 2 * l;
    // printed: |(M+1)n + M-1| < 2|Y|; cone: |2(M+1)n + M-1| < |Y|
    const long long lim = opt.region == NegativeRegion::printed ? 2 * std::abs(Y) : std::abs(Y);
    const long long a = opt.region == NegativeRegion::printed ? M + 1 : 2 * (M + 1);
    const long long lo = (-lim - (M - 1)) / a - 1, hi = (lim - (M - 1)) / a + 1;
    for (long long n = lo; n <= hi; ++n) {
      const long long v = a * n + M - 1;
      if (std::abs(v) < lim) visit(n, nu);
    }
  }
  std::vector<ZSeries::Term> t;
  for (auto& [m, c] : acc)
    if (c != 0) t.emplace_back(m, c);
  res.series = ZSeries::from_terms(D, std::move(t), trunc);
  return res;
}

namespace detail {

/// Arithmetic in Z[x]/(x^N - 1), enough to evaluate finite q-sums at zeta_N.
struct ModCyclic {
  long long N;
  std::vector<BigInt> zero() const { return std::vector<BigInt>(static_cast<std::size_t>(N), BigInt(0)); }
  std::size_t idx(long long e) const { return static_cast<std::size_t>(((e % N) + N) % N); }
  std::vector<BigInt> from_dense(const Dense<BigInt>& p, long long sign_of_exponent = 1) const {
    auto r = zero();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != 0) r[idx(sign_of_exponent * static_cast<long long>(i))] += p[i];
    return r;
  }
  std::vector<BigInt> mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) const {
    auto r = zero();
    for (long long i = 0; i < N; ++i) {
      if (a[static_cast<std::size_t>(i)] == 0) continue;
      for (long long j = 0; j < N; ++j)
        if (b[static_cast<std::size_t>(j)] != 0)
          r[idx(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    }
    return r;
  }
  CycNumber value(const std::vector<BigInt>& a) const {
    std::vector<Rational> v(a.begin(), a.end());
    return CycNumber::from_powers(N, std::move(v));
  }
};

inline Dense<BigInt> full_poly(const ZSeries& s) {
  Dense<BigInt> d;
  for (const auto& [m, c] : s.terms()) {
    if (s.denom() != 1 || m < 0) throw std::logic_error("expected an ordinary polynomial");
    if (d.size() <= static_cast<std::size_t>(m)) d.resize(static_cast<std::size_t>(m) + 1, BigInt(0));
    d[static_cast<std::size_t>(m)] = c;
  }
  return d;
}

}  // namespace detail

/// F_k^{(l)}(zeta_N). (q)_{n_k} vanishes at zeta_N once n_k >= N, and the
/// binomials force n_j <= n_{j+1} + 1, so the sum is finite.
inline CycNumber kz_eval_root(long long k, long long l, long long N) {
  if (k < 1 || l < 1 || l > k) throw std::invalid_argument("kz_eval_root needs 1 <= l <= k");
  if (N < 1) throw std::invalid_argument("kz_eval_root needs N >= 1");
  const detail::ModCyclic R{N};
  auto total = R.zero();
  std::vector<long long> ns(static_cast<std::size_t>(k + 1), 0);
  for (long long nk = 0; nk < N; ++nk) {
    ns[static_cast<std::size_t>(k)] = nk;
    const auto poch = R.from_dense(pochhammer_dense(PochSpec::q(), nk, static_cast<std::size_t>(nk * (nk + 1) / 2 + 1)));
    // choose n_{k-1}, ..., n_1 downward
    std::function<void(long long, std::vector<BigInt>)> go = [&](long long j, std::vector<BigInt> acc) {
      if (j == 0) {
        long long e = k;
        for (long long r = 1; r < k; ++r) {
          e += ns[r] * ns[r];
          if (r >= l) e += ns[r];
        }
        auto mono = R.zero();
        mono[R.idx(e)] = 1;
        auto t = R.mul(acc, mono);
        for (std::size_t i = 0; i < t.size(); ++i) total[i] += t[i];
        return;
      }
      const long long top = ns[j + 1] + (j == l - 1 ? 1 : 0);
      for (long long v = 0; v <= top; ++v) {
        ns[j] = v;
        const auto g = R.from_dense(detail::full_poly(gaussian_binomial(top, v)));
        go(j - 1, R.mul(acc, g));
      }
    };
    go(k - 1, poch);
  }
  return R.value(total);
}

/// U_k^{(l)}(-1; zeta_N^{-1}) = [q^{-k} sum_{n >= 1} q^n (q)_{n-1}^2 H_n(k,l;1;q)] at q = zeta_N^{-1}.
inline CycNumber u_eval_root(long long k, long long l, long long N) {
  if (k < 1 || l < 1 || l > k) throw std::invalid_argument("u_eval_root needs 1 <= l <= k");
  if (N < 1) throw std::invalid_argument("u_eval_root needs N >= 1");
  const detail::ModCyclic R{N};
  auto total = R.zero();
  for (long long n = 1; n <= N; ++n) {
    const std::size_t pc = static_cast<std::size_t>(n * (n - 1) / 2 + 1);
    const auto p = pochhammer_dense(PochSpec::q(), n - 1, pc);
    detail::Dense<BigInt> t = detail::mul(p, p, 2 * pc);
    t = detail::mul(t, detail::full_poly(hpoly({k, l, 1, n})), std::numeric_limits<std::size_t>::max());
    detail::Dense<BigInt> shifted(static_cast<std::size_t>(n), BigInt(0));
    shifted.insert(shifted.end(), t.begin(), t.end());
    auto v = R.from_dense(shifted, -1);
    // q^{-k} at q = zeta_N^{-1} is zeta_N^{k}
    auto mono = R.zero();
    mono[R.idx(k)] = 1;
    v = R.mul(v, mono);
    for (std::size_t i = 0; i < v.size(); ++i) total[i] += v[i];
  }
  return R.value(total);
}

/// Table x^t -> q-series of sum_{n >= 0} q^n (-x)_n (-q/x)_n H_n(k,l;0;q) below trunc,
/// restricted to t_min <= t <= t_max. x is kept symbolic.
inline std::map<long long, ZSeries> ucal_series(long long k, long long l, const Rational& trunc,
                                                long long t_min = std::numeric_limits<long long>::min(),
                                                long long t_max = std::numeric_limits<long long>::max()) {
  if (k < 1 || l < 1 || l > k) throw std::invalid_argument("ucal_series needs 1 <= l <= k");
  const std::size_t cap = detail::cap_of(trunc);
  std::map<long long, detail::Dense<BigInt>> acc;
  // P holds (-x)_n (-q/x)_n as x-power -> dense q-series
  std::map<long long, detail::Dense<BigInt>> P{{0, detail::Dense<BigInt>{BigInt(1)}}};
  for (long long n = 0; static_cast<std::size_t>(n) < cap; ++n) {
    const std::size_t room = cap - static_cast<std::size_t>(n);
    const auto h = detail::hpoly_dense(k, l, 0, n, room);
    for (const auto& [t, poly] : P)
      if (t >= t_min && t <= t_max) detail::add_shifted(acc[t], detail::mul(poly, h, room), static_cast<std::size_t>(n), BigInt(1), cap);
    // multiply by (1 + x q^n)(1 + q^{n+1}/x)
    std::map<long long, detail::Dense<BigInt>> next;
    for (const auto& [t, poly] : P) {
      detail::add_shifted(next[t], poly, 0, BigInt(1), cap);
      detail::add_shifted(next[t + 1], poly, static_cast<std::size_t>(n), BigInt(1), cap);
      detail::add_shifted(next[t - 1], poly, static_cast<std::size_t>(n + 1), BigInt(1), cap);
      detail::add_shifted(next[t], poly, static_cast<std::size_t>(2 * n + 1), BigInt(1), cap);
    }
    P.clear();
    for (auto& [t, poly] : next) {
      detail::trim(poly);
      if (!poly.empty()) P.emplace(t, std::move(poly));
    }
  }
  std::map<long long, ZSeries> out;
  for (auto& [t, poly] : acc) {
    ZSeries s = ZSeries::from_dense(poly, 0, 1, trunc);
    if (!s.is_zero()) out.emplace(t, std::move(s));
  }
  return out;
}

}  // namespace qmaass
