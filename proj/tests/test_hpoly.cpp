#include <gtest/gtest.h>

#include <functional>

#include "qmaass/hpoly.hpp"

using namespace qmaass;

namespace {

using Poly = std::vector<long long>;

void add_into(Poly& a, const Poly& b, std::size_t shift = 0) {
  if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] += b[i];
}

Poly pmul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// q-Pascal recursion: [n,k] = [n-1,k-1] + q^k [n-1,k]
Poly oracle_binom(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return {};
  if (k == 0 || k == n) return {1};
  Poly r = oracle_binom(n - 1, k - 1);
  add_into(r, oracle_binom(n - 1, k), static_cast<std::size_t>(k));
  return r;
}

// Literal transcription of the chain sum.
Poly oracle_h(long long k, long long l, int b, long long n) {
  if (k == 1) return {1};
  Poly total;
  std::vector<long long> ns(static_cast<std::size_t>(k + 1), 0);
  ns[static_cast<std::size_t>(k)] = n;
  std::function<void(long long)> go = [&](long long j) {
    if (j == k) {
      Poly term{1};
      for (long long jj = 1; jj <= k - 1; ++jj) {
        long long top = ns[jj + 1] - ns[jj] - b * jj;
        for (long long r = 1; r <= jj; ++r) top += 2 * ns[r] + (l > r ? 1 : 0);
        Poly mono(static_cast<std::size_t>(ns[jj] * ns[jj] + (1 - b) * ns[jj]) + 1, 0);
        mono.back() = 1;
        term = pmul(pmul(term, mono), oracle_binom(top, ns[jj + 1] - ns[jj]));
      }
      add_into(total, term);
      return;
    }
    for (long long v = j == 1 ? 0 : ns[j - 1]; v <= n; ++v) {
      ns[j] = v;
      go(j + 1);
    }
  };
  go(1);
  while (!total.empty() && total.back() == 0) total.pop_back();
  return total;
}

Poly as_poly(const ZSeries& s) {
  Poly p;
  for (const auto& [m, c] : s.terms()) {
    EXPECT_GE(m, 0);
    if (p.size() <= static_cast<std::size_t>(m)) p.resize(static_cast<std::size_t>(m) + 1, 0);
    p[static_cast<std::size_t>(m)] = static_cast<long long>(c);
  }
  return p;
}

// Brute-force enumeration of frequency vectors.
Poly oracle_ag(long long k, long long i, long long ip, long long L, long long cap) {
  Poly out(static_cast<std::size_t>(cap), 0);
  std::vector<long long> f(static_cast<std::size_t>(L), 0);
  std::function<void(long long, long long)> go = [&](long long j, long long w) {
    if (w >= cap) return;
    if (j == L) {
      out[static_cast<std::size_t>(w)] += 1;
      return;
    }
    for (long long v = 0;; ++v) {
      if (j == 1 && v > i - 1) break;
      if (j == L - 1 && v > ip - 1) break;
      if (j >= 2 && f[j - 1] + v > k) break;
      if (w + j * v >= cap) break;
      f[j] = v;
      go(j + 1, w + j * v);
    }
  };
  go(1, 0);
  return out;
}

}  // namespace

TEST(HPoly, KOneIsIdentically1) {
  for (long long n = 0; n <= 30; ++n)
    for (int b : {0, 1}) EXPECT_EQ(hpoly({1, 1, b, n}), ZSeries::one());
}

TEST(HPoly, NZeroIs1) {
  for (long long k = 1; k <= 4; ++k)
    for (long long l = 1; l <= k; ++l) EXPECT_EQ(hpoly({k, l, 0, 0}), ZSeries::one()) << k << "," << l;
}

TEST(HPoly, NZeroWithBOneFollowsZeroConvention) {
  // the all-zero chain has top entries min(j, l-1) - j, negative once j >= l
  for (long long k = 1; k <= 4; ++k)
    for (long long l = 1; l <= k; ++l)
      EXPECT_EQ(hpoly({k, l, 1, 0}), l == k ? ZSeries::one() : ZSeries::zero()) << k << "," << l;
}

TEST(HPoly, HandExpansion) { EXPECT_EQ(hpoly({2, 1, 1, 1}), ZSeries::monomial(BigInt(1), Rational(1))); }

TEST(HPoly, MatchesLiteralChainSum) {
  for (long long k = 2; k <= 4; ++k)
    for (long long l = 1; l <= k; ++l)
      for (int b : {0, 1})
        for (long long n = 0; n <= (k == 4 ? 4 : 7); ++n)
          EXPECT_EQ(as_poly(hpoly({k, l, b, n})), oracle_h(k, l, b, n)) << k << "," << l << "," << b << "," << n;
}

TEST(HPoly, TruncatedAgreesWithExact) {
  for (long long n = 0; n <= 10; ++n) {
    HParams p{3, 2, 0, n};
    EXPECT_EQ(hpoly(p, Rational(25)), hpoly(p).with_trunc(Rational(25)));
    EXPECT_EQ(hpoly(p, make_rational(7, 2)), hpoly(p).with_trunc(make_rational(7, 2)));
  }
}

TEST(HPoly, NonnegativeCoefficientsForBZero) {
  for (long long k = 1; k <= 3; ++k)
    for (long long l = 1; l <= k; ++l)
      for (long long n = 0; n <= 10; ++n) {
        ZSeries h = hpoly({k, l, 0, n});
        for (const auto& [m, c] : h.terms()) EXPECT_GT(c, 0) << "k=" << k << " l=" << l << " n=" << n << " q^" << m;
      }
}

TEST(HPoly, InvalidParameters) {
  EXPECT_THROW(hpoly({2, 3, 0, 1}), std::invalid_argument);
  EXPECT_THROW(hpoly({2, 0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(hpoly({2, 1, 2, 1}), std::invalid_argument);
  EXPECT_THROW(hpoly({0, 1, 0, 1}), std::invalid_argument);
}

TEST(AgGenerating, ForcedEmptyPartition) { EXPECT_EQ(ag_generating({5, 1, 1, 2}), ZSeries::one()); }

TEST(AgGenerating, EmptyPartitionAlwaysPresent) {
  for (long long L = 1; L <= 6; ++L) EXPECT_EQ(ag_generating({1, 1, 1, L}, Rational(20)).coeff(0), BigInt(1));
}

TEST(AgGenerating, UnconstrainedIsBoundedPartGenerator) {
  for (long long L = 2; L <= 6; ++L) {
    ZSeries g = ag_generating({1000, 1000, 1000, L}, Rational(40));
    ZSeries prod = ZSeries::one();
    for (long long j = 1; j < L; ++j) prod = prod * pochhammer(PochSpec::monomial(1, j), 1);
    EXPECT_EQ(g, prod.inverse(Rational(40))) << "L=" << L;
  }
}

TEST(AgGenerating, MatchesBruteForce) {
  for (long long k = 0; k <= 3; ++k)
    for (long long i = 1; i <= 3; ++i)
      for (long long ip = 1; ip <= 3; ++ip)
        for (long long L = 1; L <= 8; ++L) {
          ZSeries g = ag_generating({k, i, ip, L}, Rational(30));
          Poly o = oracle_ag(k, i, ip, L, 30);
          auto d = g.dense(30);
          for (std::size_t e = 0; e < 30; ++e) EXPECT_EQ(d[e], BigInt(o[e])) << k << i << ip << L << " q^" << e;
        }
}

TEST(AgRelation, HandCase) { EXPECT_TRUE(verify_ag_relation({2, 1, 1, 1}).pass); }

TEST(AgRelation, NZero) {
  for (long long k = 2; k <= 3; ++k)
    EXPECT_TRUE(verify_ag_relation({k, 1, 0, 0}).pass);
  EXPECT_THROW(verify_ag_relation({2, 1, 1, 0}), std::invalid_argument);
}

TEST(AgRelation, FullSweep) {
  for (long long k = 2; k <= 3; ++k)
    for (long long l = 1; l <= k; ++l)
      for (int b : {0, 1})
        for (long long n = b; n <= 8; ++n) {
          auto r = verify_ag_relation({k, l, b, n});
          EXPECT_TRUE(r.pass) << r.to_json().dump();
        }
}

TEST(AgRelation, KOneRejected) { EXPECT_THROW(verify_ag_relation({1, 1, 0, 2}), std::invalid_argument); }

TEST(AgRelation, NegativeControl) {
  // comparing against the wrong l must fail somewhere
  HParams p{3, 1, 0, 4};
  const ZSeries h = hpoly(p);
  const ZSeries g = ag_generating({2, 2, 3, 9});
  const long long e = -2 * 4 * 5;
  std::vector<ZSeries::Term> rev;
  for (const auto& [m, c] : h.terms()) rev.emplace_back(-e - m, c);
  auto r = compare_series("neg", {}, ZSeries::from_terms(1, rev), g, std::nullopt);
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.first_mismatch_exponent.has_value());
}
