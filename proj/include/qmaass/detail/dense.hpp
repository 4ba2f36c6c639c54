#pragma once

// Dense coefficient vectors for integral-exponent power series, used by the
// hot loops (Pochhammer products, Gaussian binomials, H_n chains). Index i is
// the coefficient of q^i; every routine works modulo q^{cap}.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace qmaass::detail {

template <class R>
using Dense = std::vector<R>;

/// a *= (1 - s q^e), e >= 1, keeping at most cap coefficients.
template <class R>
void mul_one_minus(Dense<R>& a, const R& s, std::size_t e, std::size_t cap) {
  const std::size_t n = std::min(cap, a.size() + e);
  a.resize(n, R(0));
  for (std::size_t i = n; i-- > e;)
    if (a[i - e] != 0) a[i] -= s * a[i - e];
}

/// a /= (1 - q^e) as a power series modulo q^{a.size()}.
template <class R>
void div_one_minus(Dense<R>& a, std::size_t e) {
  for (std::size_t i = e; i < a.size(); ++i)
    if (a[i - e] != 0) a[i] += a[i - e];
}

/// a * b modulo q^cap.
template <class R>
Dense<R> mul(const Dense<R>& a, const Dense<R>& b, std::size_t cap) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = std::min(cap, a.size() + b.size() - 1);
  Dense<R> r(n, R(0));
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < jmax; ++j)
      if (b[j] != 0) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// acc += k q^shift a, modulo q^{cap}; acc grows as needed.
template <class R>
void add_shifted(Dense<R>& acc, const Dense<R>& a, std::size_t shift, const R& k, std::size_t cap) {
  if (shift >= cap) return;
  const std::size_t n = std::min(cap, shift + a.size());
  if (acc.size() < n) acc.resize(n, R(0));
  for (std::size_t i = 0; i + shift < n; ++i)
    if (a[i] != 0) acc[i + shift] += k * a[i];
}

template <class R>
void trim(Dense<R>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

}  // namespace qmaass::detail
