#pragma once

// The polynomials H_n(k, l; b; q) and the Gordon-type partition generating
// functions G_{k,i,i',L} they are compared against.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaass/qcombinat.hpp"
#include "qmaass/report.hpp"

namespace qmaass {

struct HParams {
  long long k = 1;
  long long l = 1;
  int b = 0;
  long long n = 0;

  void validate() const {
    if (k < 1) throw std::invalid_argument("H_n needs k >= 1");
    if (l < 1 || l > k) throw std::invalid_argument("H_n needs 1 <= l <= k");
    if (b != 0 && b != 1) throw std::invalid_argument("H_n needs b in {0, 1}");
    if (n < 0) throw std::invalid_argument("H_n needs n >= 0");
  }

  nlohmann::json to_json() const { return {{"k", k}, {"l", l}, {"b", b}, {"n", n}}; }
};

/// Upper bound on deg H_n, used as the exact-mode capacity.
inline long long hpoly_degree_bound(const HParams& p) {
  const long long n = p.n, k = p.k;
  const long long top = n + (k - 1) * (2 * n + 1);
  return (k - 1) * (n * n + n + n * top);
}

namespace detail {

struct HChain {
  const HParams& p;
  std::size_t cap;
  std::vector<long long> ns;  // ns[1..k], ns[k] = n
  Dense<BigInt> acc;

  long long top(long long j) const {
    long long s = ns[j + 1] - ns[j] - p.b * j;
    for (long long r = 1; r <= j; ++r) s += 2 * ns[r] + (p.l > r ? 1 : 0);
    return s;
  }

  long long weight(long long v) const { return v * v + (1 - p.b) * v; }

  // Chooses ns[j] given ns[1..j-1]; `prod` holds the binomials for factors < j-1.
  void rec(long long j, const Dense<BigInt>& prod, long long shift) {
    const long long k = p.k;
    if (j == k) {
      // close the last factor j-1 = k-1 with ns[k] = n
      Dense<BigInt> full = prod;
      if (k >= 2 && !close_factor(k - 1, full, shift)) return;
      add_shifted(acc, full, static_cast<std::size_t>(shift), BigInt(1), cap);
      return;
    }
    const long long lo = j == 1 ? 0 : ns[j - 1];
    for (long long v = lo; v <= p.n; ++v) {
      const long long w = weight(v);
      // the remaining k-1-j indices are each >= v
      if (shift + w + (k - 1 - j) * w >= static_cast<long long>(cap)) break;
      ns[j] = v;
      Dense<BigInt> next = prod;
      if (j >= 2 && !close_factor(j - 1, next, shift + w)) continue;
      rec(j + 1, next, shift + w);
    }
  }

  // Multiplies in the binomial of factor j (needs ns[j], ns[j+1]); false if it vanishes.
  bool close_factor(long long j, Dense<BigInt>& prod, long long shift) const {
    const long long t = top(j), bot = ns[j + 1] - ns[j];
    if (t < 0 || bot < 0 || bot > t) return false;
    if (shift >= static_cast<long long>(cap)) return false;
    const std::size_t room = cap - static_cast<std::size_t>(shift);
    const auto& g = gaussian_binomial_dense(t, bot, room);
    prod = mul(prod, g, room);
    return !prod.empty();
  }
};

}  // namespace detail

/// H_n(k, l; b; q) below trunc (exact polynomial when trunc is absent).
inline ZSeries hpoly(const HParams& p, Trunc trunc = std::nullopt) {
  p.validate();
  const std::size_t cap = static_cast<std::size_t>(int_cap(trunc, hpoly_degree_bound(p) + 1));
  if (cap == 0) return ZSeries::zero(trunc);
  if (p.k == 1) return ZSeries::one(trunc);
  detail::HChain h{p, cap, std::vector<long long>(static_cast<std::size_t>(p.k + 1), 0), {}};
  h.ns[static_cast<std::size_t>(p.k)] = p.n;
  h.rec(1, detail::Dense<BigInt>{BigInt(1)}, 0);
  return ZSeries::from_dense(h.acc, 0, 1, trunc);
}

/// Frequency constraints: parts 1..L-1 with f_1 <= i-1, f_{L-1} <= i'-1 and
/// f_j + f_{j+1} <= k for 1 <= j <= L-2.
struct PartitionConstraint {
  long long k = 1;
  long long i = 1;
  long long ip = 1;
  long long L = 1;

  long long max_freq(long long j) const {
    // a single part size has no neighbour, so k does not bound it
    long long m = L - 1 >= 2 ? k : std::numeric_limits<long long>::max();
    if (j == 1) m = std::min(m, i - 1);
    if (j == L - 1) m = std::min(m, ip - 1);
    return m;
  }
  long long weight_bound() const {
    long long m = 0;
    for (long long j = 1; j < L; ++j) m = std::max(m, max_freq(j));
    return m * L * (L - 1) / 2;
  }
  nlohmann::json to_json() const { return {{"k", k}, {"i", i}, {"i_prime", ip}, {"L", L}}; }
};

/// sum over admissible frequency vectors of q^{sum j f_j}, below trunc.
/// Vectors are enumerated part by part; frequency vectors sharing the same
/// last frequency are merged (transfer over the adjacency constraint).
inline ZSeries ag_generating(const PartitionConstraint& c, Trunc trunc = std::nullopt) {
  if (c.k < 0 || c.i < 1 || c.ip < 1 || c.L < 1) throw std::invalid_argument("invalid partition constraint");
  const std::size_t cap = static_cast<std::size_t>(int_cap(trunc, c.weight_bound() + 1));
  if (cap == 0) return ZSeries::zero(trunc);
  if (c.L == 1) return ZSeries::one(trunc);
  // state[f] = generating polynomial of prefixes ending with f_j = f
  std::vector<detail::Dense<BigInt>> state(1, detail::Dense<BigInt>{BigInt(1)});
  for (long long j = 1; j <= c.L - 1; ++j) {
    const long long fmax = c.max_freq(j);
    std::vector<detail::Dense<BigInt>> next(static_cast<std::size_t>(std::max(0LL, fmax) + 1));
    for (long long prev = 0; prev < static_cast<long long>(state.size()); ++prev) {
      const auto& poly = state[static_cast<std::size_t>(prev)];
      if (poly.empty()) continue;
      for (long long f = 0; f <= fmax; ++f) {
        if (j >= 2 && prev + f > c.k) break;
        detail::add_shifted(next[static_cast<std::size_t>(f)], poly, static_cast<std::size_t>(j * f), BigInt(1), cap);
      }
    }
    state = std::move(next);
  }
  detail::Dense<BigInt> total;
  for (const auto& s : state) detail::add_shifted(total, s, 0, BigInt(1), cap);
  return ZSeries::from_dense(total, 0, 1, trunc);
}

/// H_n(k,l;b;1/q) = q^{(k-1)bn - 2(k-1)C(n+1,2)} G_{k-1,l,k,2n-b+1}(q), checked
/// coefficientwise below trunc (the full polynomial when trunc is absent).
/// (n, b) = (0, 1) gives L = 0, for which G is undefined; it is rejected.
inline VerificationReport verify_ag_relation(const HParams& p, Trunc trunc = std::nullopt) {
  p.validate();
  if (p.k < 2) throw std::invalid_argument("the partition relation needs k >= 2");
  if (2 * p.n - p.b + 1 < 1) throw std::invalid_argument("the partition relation needs 2n - b + 1 >= 1");
  const ZSeries h = hpoly(p);
  const long long e = (p.k - 1) * p.b * p.n - (p.k - 1) * p.n * (p.n + 1);
  std::vector<ZSeries::Term> rev;
  for (const auto& [m, c] : h.terms()) rev.emplace_back(-e - m, c);
  const ZSeries lhs = ZSeries::from_terms(1, rev).with_trunc(trunc);
  const PartitionConstraint pc{p.k - 1, p.l, p.k, 2 * p.n - p.b + 1};
  const ZSeries rhs = ag_generating(pc, trunc);
  nlohmann::json params = p.to_json();
  params["trunc"] = trunc_string(trunc);
  auto r = compare_series("ag_relation", params, lhs, rhs, trunc);
  r.details["partition_constraint"] = pc.to_json();
  return r;
}

}  // namespace qmaass
