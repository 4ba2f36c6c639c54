#pragma once

// Indefinite theta series for the signature (1,1) form
// Q(x, y) = ((M+1) x^2 - (M-1) y^2) / 2: exact parameter tables for the
// families F_j, lattice expansions, and the exact parameter checks.

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaass/fser.hpp"

namespace qmaass {

using Vec2 = std::array<Rational, 2>;
using Mat2 = std::array<std::array<long long, 2>, 2>;

inline std::string to_string(const Vec2& v) { return "(" + to_string(v[0]) + ", " + to_string(v[1]) + ")"; }
inline nlohmann::json vec_json(const Vec2& v) { return nlohmann::json::array({to_string(v[0]), to_string(v[1])}); }

/// (x1, x2) -> (-x1, x2).
inline Vec2 star(const Vec2& x) { return {-x[0], x[1]}; }

inline Vec2 operator+(const Vec2& x, const Vec2& y) { return {x[0] + y[0], x[1] + y[1]}; }
inline Vec2 operator-(const Vec2& x, const Vec2& y) { return {x[0] - y[0], x[1] - y[1]}; }
inline Vec2 operator*(const Rational& s, const Vec2& x) { return {s * x[0], s * x[1]}; }
inline bool is_integral(const Vec2& v) { return is_integer(v[0]) && is_integer(v[1]); }

struct ThetaParams {
  long long M = 2;
  Vec2 a{Rational(0), Rational(0)};
  Vec2 b{Rational(0), Rational(0)};

  void validate() const {
    if (M < 2) throw std::invalid_argument("theta parameters need M >= 2");
    if (is_integer(a[0] + a[1]) || is_integer(a[0] - a[1]))
      throw std::invalid_argument("theta parameters need a1 + a2 and a1 - a2 outside Z");
  }
  nlohmann::json to_json() const { return {{"M", M}, {"a", vec_json(a)}, {"b", vec_json(b)}}; }
};

/// A = diag(M+1, 1-M) with Q(r) = r^T A r / 2 and B(r, mu) = r^T A mu.
struct QuadraticData {
  long long M;

  explicit QuadraticData(long long m) : M(m) {
    if (M < 2) throw std::invalid_argument("quadratic form needs M >= 2");
  }

  Mat2 A() const { return {{{M + 1, 0}, {0, 1 - M}}}; }
  Rational Q(const Vec2& r) const { return (Rational(M + 1) * r[0] * r[0] - Rational(M - 1) * r[1] * r[1]) / 2; }
  Rational B(const Vec2& r, const Vec2& mu) const {
    return Rational(M + 1) * r[0] * mu[0] - Rational(M - 1) * r[1] * mu[1];
  }
  double Q(double x, double y) const {
    return 0.5 * (static_cast<double>(M + 1) * x * x - static_cast<double>(M - 1) * y * y);
  }
  double B(const std::array<double, 2>& r, const std::array<double, 2>& mu) const {
    return static_cast<double>(M + 1) * r[0] * mu[0] - static_cast<double>(M - 1) * r[1] * mu[1];
  }

  /// c_l = ((-1)^l (M-1), M+1) / sqrt(M^2 - 1), l in {1, 2}.
  std::array<double, 2> c(int l) const {
    const double s = std::sqrt(static_cast<double>(M * M - 1));
    return {(l % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(M - 1) / s, static_cast<double>(M + 1) / s};
  }

  Mat2 gamma() const { return {{{M, M - 1}, {M + 1, M}}}; }
  Vec2 apply_gamma(const Vec2& x) const {
    return {Rational(M) * x[0] + Rational(M - 1) * x[1], Rational(M + 1) * x[0] + Rational(M) * x[1]};
  }
  std::array<double, 2> apply_gamma(const std::array<double, 2>& x) const {
    const double m = static_cast<double>(M);
    return {m * x[0] + (m - 1) * x[1], (m + 1) * x[0] + m * x[1]};
  }
};

/// Exact automorph checks: det gamma_M = 1 and gamma^T A gamma = A.
inline bool gamma_is_automorph(long long M) {
  const QuadraticData qd(M);
  const Mat2 g = qd.gamma(), A = qd.A();
  if (g[0][0] * g[1][1] - g[0][1] * g[1][0] != 1) return false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      long long s = 0;
      for (int k = 0; k < 2; ++k) s += g[k][i] * A[k][k] * g[k][j];
      if (s != A[i][j]) return false;
    }
  return true;
}

/// (a, b) ~ (alpha, beta): a + s alpha in Z^2 and mu = b + s beta in Z^2 with
/// B(a, mu) in Z, for one sign s in {+1, -1} used in both places.
inline bool equivalence_check(const Vec2& a, const Vec2& b, const Vec2& alpha, const Vec2& beta,
                              const QuadraticData& qd) {
  for (int s : {1, -1}) {
    const Rational sr(s);
    if (!is_integral(a + sr * alpha)) continue;
    const Vec2 mu = b + sr * beta;
    if (!is_integral(mu)) continue;
    if (is_integer(qd.B(a, mu))) return true;
  }
  return false;
}

/// Parameters of one family: q^alpha F_j(k, l; q^d) = scale * S_{a,b;M}.
struct FamilyParams {
  FamilyId id;
  ThetaParams theta;
  Rational alpha;
  Rational scale;
  int d = 1;

  nlohmann::json to_json() const {
    nlohmann::json j = id.to_json();
    j["M"] = theta.M;
    j["a"] = vec_json(theta.a);
    j["b"] = vec_json(theta.b);
    j["alpha"] = to_string(alpha);
    j["scale"] = to_string(scale);
    j["d"] = d;
    return j;
  }
};

inline FamilyParams param_table(const FamilyId& id) {
  id.validate();
  const long long k = id.k, l = id.l;
  auto r = [](long long p, long long q) { return make_rational(p, q); };
  FamilyParams fp;
  fp.id = id;
  fp.d = id.d();
  const Rational a2 = r(2 * k - 2 * l + 1, 2 * (2 * k + 1));
  if (id.j == 1 || id.j == 3) {
    fp.theta.M = 2 * k + 2;
    fp.theta.a = {id.j == 1 ? r(2 * k + 1, 2 * (2 * k + 3)) : r(-1, 2 * (2 * k + 3)), a2};
    fp.theta.b = {r(1, 2 * (2 * k + 3)), r(1, 2 * (2 * k + 1))};
  } else {
    fp.theta.M = 4 * k + 3;
    fp.theta.a = {id.j == 2 ? r(k, 2 * (k + 1)) : Rational(0), a2};
    fp.theta.b = {r(1, 8 * (k + 1)), r(1, 4 * (2 * k + 1))};
  }
  if (id.j == 1)
    fp.alpha = r((2 * k + 1) * (2 * k + 1), 8 * (2 * k + 3)) - r((2 * k - 2 * l + 1) * (2 * k - 2 * l + 1), 8 * (2 * k + 1));
  else
    fp.alpha = QuadraticData(fp.theta.M).Q(fp.theta.a);
  static const Rational scales[4] = {Rational(1), make_rational(1, 2), Rational(-1), Rational(-1)};
  fp.scale = scales[id.j - 1];
  return fp;
}

// ---------------------------------------------------------------------------
// Exact parameter validation

struct ParamCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  FamilyId id;
  std::vector<ParamCheck> checks;
  std::string branch;  // "direct", "star" or "none"

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  VerificationReport as_verification() const {
    VerificationReport r;
    r.check = "params";
    r.params = id.to_json();
    r.pass = pass();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
    r.details["checks"] = arr;
    r.details["equivalence_branch"] = branch;
    return r;
  }
};

inline ValidationReport validate_params(const FamilyId& id) {
  const FamilyParams fp = param_table(id);
  const QuadraticData qd(fp.theta.M);
  const Vec2 &a = fp.theta.a, &b = fp.theta.b;
  const long long k = id.k, l = id.l;
  const Vec2 one{Rational(1), Rational(1)};
  ValidationReport rep;
  rep.id = id;
  auto add = [&](std::string name, bool ok, std::string detail) { rep.checks.push_back({std::move(name), ok, std::move(detail)}); };

  add("a_nonzero", a[0] != 0 || a[1] != 0, to_string(a));
  const Rational sp = a[0] + a[1], sm = a[0] - a[1];
  add("0<a1+a2<1", sp > 0 && sp < 1, to_string(sp));
  if (id.j <= 2)
    add("0<a1-a2<1", sm > 0 && sm < 1, to_string(sm));
  else
    add("-1<a1-a2<0", sm > -1 && sm < 0, to_string(sm));

  auto congruence = [&](const std::string& name, const Vec2& lhs, const Vec2& rhs) {
    add(name, lhs == rhs, to_string(lhs) + " vs " + to_string(rhs));
  };
  const Vec2 ga = qd.apply_gamma(a), gas = qd.apply_gamma(star(a));
  const Vec2 gb = qd.apply_gamma(b), gbs = qd.apply_gamma(star(b));
  long long s1 = 0, s2 = 0, bval = 0;
  switch (id.j) {
    case 1: s1 = l - 2 * k - 1; s2 = l; bval = -l; break;
    case 2: s1 = 2 * l - 4 * k - 1; s2 = 2 * l - 1; bval = -2 * l + 1; break;
    case 3: s1 = l - k; s2 = l - k - 1; bval = k - l + 1; break;
    default: s1 = 2 * l - 2 * k - 1; bval = 2 * k - 2 * l + 1; break;
  }
  const std::string S1 = std::to_string(s1), S2 = std::to_string(s2);
  if (id.j == 4) {
    congruence("gamma a + (" + S1 + ")(1,1) = a", ga + Rational(s1) * one, a);
  } else {
    congruence("gamma a + (" + S1 + ")(1,1) = a*", ga + Rational(s1) * one, star(a));
    congruence("gamma a* + (" + S2 + ")(1,1) = a", gas + Rational(s2) * one, a);
  }
  congruence("gamma b - (1,1) = b*", gb - one, star(b));
  congruence("gamma b* = b", gbs, b);
  const Rational bv = qd.B(a, {Rational(-1), Rational(-1)});
  add("B(a,(-1,-1)) = " + std::to_string(bval), bv == Rational(bval), to_string(bv));

  const bool direct = equivalence_check(ga, gb, a, b, qd);
  const bool starred = equivalence_check(ga, gb, star(a), star(b), qd) && equivalence_check(gas, gbs, a, b, qd);
  rep.branch = direct ? "direct" : starred ? "star" : "none";
  add("equivalence hypothesis", direct || starred, rep.branch);
  return rep;
}

// ---------------------------------------------------------------------------
// Lattice expansion of S_{a,b;M}

/// A lattice term below the window was found outside the enumeration box, or
/// an exponent was not positive.
struct ThetaEnumerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// True when the phases e((M+1) b1 n - (M-1) b2 nu) are all +-1.
inline bool phases_collapse(const ThetaParams& p) {
  return is_integer(Rational(2 * (p.M + 1)) * p.b[0]) && is_integer(Rational(2 * (p.M - 1)) * p.b[1]);
}

namespace detail {

inline long long isqrt_ceil(const Rational& t) {
  // smallest s >= 0 with s^2 >= t
  long long s = static_cast<long long>(std::sqrt(std::max(0.0, to_double(t))));
  while (Rational(s * s) < t) ++s;
  while (s > 0 && Rational((s - 1) * (s - 1)) >= t) --s;
  return s;
}

/// Calls f(n, nu, exponent) for each lattice point of the two regions whose
/// exponent is below trunc. With x = n + a1, y = nu + a2 both regions lie in
/// |y| < |x|, where (M+1)x^2 - (M-1)y^2 > 2x^2, so x^2 < trunc. One layer
/// beyond that box is scanned and must contribute nothing.
template <class F>
void for_each_s_term(const ThetaParams& p, const Rational& trunc, F&& f) {
  p.validate();
  if (trunc <= 0) return;
  const QuadraticData qd(p.M);
  const BigInt up = -floor_of(p.a[0] + p.a[1]), wp = -floor_of(p.a[0] - p.a[1]);
  const long long R = isqrt_ceil(trunc) + 1;
  const long long n_lo = to_ll(floor_of(-p.a[0])) - R - 1, n_hi = to_ll(ceil_of(-p.a[0])) + R + 1;
  for (long long n = n_lo; n <= n_hi; ++n) {
    const Rational x = Rational(n) + p.a[0];
    const Rational ax = x < 0 ? -x : x;
    const long long nu_lo = to_ll(floor_of(-p.a[1] - ax)) - 1, nu_hi = to_ll(ceil_of(-p.a[1] + ax)) + 1;
    for (long long nu = nu_lo; nu <= nu_hi; ++nu) {
      const BigInt u(n + nu), w(n - nu);
      const bool r1 = u >= up && w >= wp, r2 = u < up && w < wp;
      if (!r1 && !r2) continue;
      const Rational y = Rational(nu) + p.a[1];
      const Rational e = qd.Q({x, y});
      if (e <= 0)
        throw ThetaEnumerationError("non-positive exponent " + to_string(e) + " at (n, nu) = (" + std::to_string(n) +
                                    ", " + std::to_string(nu) + ")");
      if (e >= trunc) continue;
      if (!(x * x < trunc) || !(y * y < x * x))
        throw ThetaEnumerationError("lattice term q^" + to_string(e) + " outside the enumeration box at (n, nu) = (" +
                                    std::to_string(n) + ", " + std::to_string(nu) + ")");
      f(n, nu, e);
    }
  }
}

}  // namespace detail

/// S_{a,b;M} below trunc over the cyclotomic numbers.
inline CycSeries s_series(const ThetaParams& p, const Rational& trunc) {
  const Rational b1 = Rational(p.M + 1) * p.b[0], b2 = Rational(p.M - 1) * p.b[1];
  std::map<Rational, CycNumber> acc;
  detail::for_each_s_term(p, trunc, [&](long long n, long long nu, const Rational& e) {
    acc[e] += CycNumber::e(frac_of(b1 * Rational(n) - b2 * Rational(nu)));
  });
  return CycSeries::from_map(acc, trunc);
}

/// S_{a,b;M} below trunc when every phase is +-1.
inline ZSeries s_series_integer(const ThetaParams& p, const Rational& trunc) {
  if (!phases_collapse(p)) throw std::domain_error("phases of S_{a,b;M} are not all +-1 for these b");
  const BigInt e1 = numerator(Rational(2 * (p.M + 1)) * p.b[0]), e2 = numerator(Rational(2 * (p.M - 1)) * p.b[1]);
  std::map<Rational, BigInt> acc;
  detail::for_each_s_term(p, trunc, [&](long long n, long long nu, const Rational& e) {
    const BigInt s = e1 * n - e2 * nu;
    acc[e] += (s % 2 == 0) ? 1 : -1;
  });
  return ZSeries::from_map(acc, trunc);
}

// ---------------------------------------------------------------------------
// Lattice forms of F_j

namespace detail {

/// Calls f(e, c) for the terms c q^e (c in Z, e >= 0) of the lattice form of
/// F_j (2 F_2 for j = 2) with e < T; every term below T is visited.
template <class F>
void for_each_prop32_term(const FamilyId& id, long long T, F&& f) {
  const long long k = id.k, l = id.l;
  auto P = [&](long long nu) { return ((2 * k + 1) * nu * nu + (2 * k - 2 * l + 1) * nu) / 2; };
  auto put = [&](long long e, long long c) {
    if (e < 0) throw std::logic_error("negative exponent in lattice sum");
    if (e < T) f(e, c);
  };
  for (long long n = id.j <= 2 ? 0 : 1;; ++n) {
    long long extra = 0;
    switch (id.j) {
      case 1: extra = k * n + n * (n + 1) / 2; break;
      case 2: extra = k * n; break;
      case 3: extra = n * (n - 1) / 2; break;
      default: extra = 0; break;
    }
    // P(nu) <= (2k+1)(n^2+n)/2 on |nu| <= n
    const long long lower = (k + 1) * n * n + extra - (2 * k + 1) * (n * n + n) / 2 - 1;
    if (n > 2 * k + 2 && lower >= T) break;
    const long long nu_hi = id.j <= 2 ? n : n - 1;
    for (long long nu = -n; nu <= nu_hi; ++nu) {
      const long long sg = (n + nu) % 2 == 0 ? 1 : -1;
      const long long e = (k + 1) * n * n + extra - P(nu);
      switch (id.j) {
        case 1: case 2: put(e, sg); put(e + 2 * n + 1, -sg); break;
        case 3: put(e, -sg); put(e + n, -sg); break;
        default: put(e, -2 * sg); break;
      }
    }
  }
}

}  // namespace detail

/// The lattice representation of F_j(k, l; q) below trunc.
inline QQSeries prop32_series(const FamilyId& id, const Rational& trunc) {
  id.validate();
  const std::size_t cap = detail::cap_of(trunc);
  if (cap == 0) return QQSeries::zero(trunc);
  std::vector<BigInt> acc(cap, BigInt(0));
  detail::for_each_prop32_term(id, static_cast<long long>(cap), [&](long long e, long long c) { acc[static_cast<std::size_t>(e)] += c; });
  QQSeries s = to_rational_series(ZSeries::from_dense(acc, 0, 1, trunc));
  return id.j == 2 ? s.scaled(make_rational(1, 2)) : s;
}

inline VerificationReport verify_prop32(const FamilyId& id, const Rational& trunc) {
  nlohmann::json params = id.to_json();
  params["trunc"] = to_string(trunc);
  return compare_series("prop32", params, f_series(id, trunc), prop32_series(id, trunc), trunc);
}

/// q^alpha F_j(k, l; q^d) against scale * S_{a,b;M}, compared below q^{alpha + order}.
inline VerificationReport verify_thm1(const FamilyId& id, const Rational& order) {
  const FamilyParams fp = param_table(id);
  const QQSeries lhs = f_series(id, order / Rational(fp.d)).compose_power(Rational(fp.d)).shifted(fp.alpha);
  const Rational upto = fp.alpha + order;
  const QQSeries rhs = to_rational_series(s_series_integer(fp.theta, upto)).scaled(fp.scale);
  nlohmann::json params = fp.to_json();
  params["order"] = to_string(order);
  return compare_series("thm1", params, lhs, rhs, upto);
}

}  // namespace qmaass
