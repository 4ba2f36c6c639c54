#pragma once

// Waveforms from Fourier coefficient tables, Cohen's example built from
// sigma and sigma*, exact values of F_j at roots of unity, radial limits and
// cocycle samples.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmaass/bessel.hpp"
#include "qmaass/theta.hpp"

namespace qmaass {

/// f(tau) = kappa_1 v^{1/2} + kappa_2 v^{1/2} log v + v^{1/2} sum_{n != 0} A(n) K_0(2 pi |n| v / N) e(n u / N).
struct MaassCoeffTable {
  enum class Source { cohen, family, other };

  long long N = 1;
  std::map<long long, Rational> coeffs;  // n -> A(n), n != 0
  double kappa1 = 0, kappa2 = 0;
  Source source = Source::other;
  FamilyId family;           // meaningful when source == family
  bool experimental = false; // negative coefficients without a proof of the pairing
  std::string label;
  long long complete_to = 0;  // every A(n) with |n| <= complete_to is present (zeros omitted); 0 if unknown

  long long extent() const {
    if (complete_to > 0) return complete_to;
    long long m = 0;
    for (const auto& [n, c] : coeffs) m = std::max(m, std::llabs(n));
    return m;
  }
  bool is_cusp_form() const { return kappa1 == 0 && kappa2 == 0; }
};

/// Cohen's example: N = 24, T(24m + 1) = S(m), T(1 - 24m) = S*(m) where
/// sigma = sum S(m) q^m and sigma* = sum S*(m) q^m.
inline MaassCoeffTable cohen_table(long long n_max) {
  if (n_max < 1) throw std::invalid_argument("cohen_table needs n_max >= 1");
  MaassCoeffTable t;
  t.N = 24;
  t.source = MaassCoeffTable::Source::cohen;
  t.label = "cohen";
  t.complete_to = n_max;
  const long long mmax = (n_max - 1) / 24;
  const ZSeries s = sigma_series(SigmaRep::alternating, Rational(mmax + 1));
  const ZSeries ss = sigma_star_series(SigmaStarRep::alternating, Rational(n_max / 24 + 2));
  for (const auto& [m, c] : s.terms())
    if (24 * m + 1 <= n_max) t.coeffs[24 * m + 1] = Rational(c);
  for (const auto& [m, c] : ss.terms())
    if (m >= 1 && 24 * m - 1 <= n_max) t.coeffs[1 - 24 * m] = Rational(c);
  return t;
}

/// Table of the waveform whose positive part is q^alpha F_j(k, l; q^d), read off
/// the lattice: A(n) = scale e(-B(a, b)) sum e(B(r, b)) over r with N Q(r) = n in
/// the cones of Phi_{a,b}, boundary points of the second cone counted with
/// weight 1/2. Positive coefficients are those of the family below
/// q^{alpha + order}; with include_negative the cone Q < 0 is added for
/// |Q| < order and the table is flagged experimental.
inline MaassCoeffTable family_table(const FamilyId& id, const Rational& order, bool include_negative = false) {
  const FamilyParams fp = param_table(id);
  const ThetaParams& p = fp.theta;
  const QuadraticData qd(p.M);
  const Rational upto = fp.alpha + order;
  const ZSeries S = s_series_integer(p, upto);
  MaassCoeffTable t;
  t.source = MaassCoeffTable::Source::family;
  t.family = id;
  t.label = "F" + std::to_string(id.j) + "(" + std::to_string(id.k) + "," + std::to_string(id.l) + ")";
  long long N = S.denom();
  std::map<Rational, Rational> neg;
  if (include_negative) {
    t.experimental = true;
    // (M+1)^2 x^2 < (M-1)^2 y^2 gives |Q| > (M-1) y^2 / (M+1)
    const BigInt e1 = numerator(Rational(2 * (p.M + 1)) * p.b[0]), e2 = numerator(Rational(2 * (p.M - 1)) * p.b[1]);
    const double ymax = std::sqrt(to_double(order) * static_cast<double>(p.M + 1) / static_cast<double>(p.M - 1)) + 2;
    for (long long nu = static_cast<long long>(-ymax - 2); nu <= static_cast<long long>(ymax + 2); ++nu) {
      const Rational y = Rational(nu) + p.a[1];
      for (long long n = static_cast<long long>(-ymax - 2); n <= static_cast<long long>(ymax + 2); ++n) {
        const Rational x = Rational(n) + p.a[0];
        // rho^perp is 1 inside (M+1)^2 x^2 < (M-1)^2 y^2 and 1/2 on its boundary
        const Rational lhs = Rational((p.M + 1) * (p.M + 1)) * x * x, rhs = Rational((p.M - 1) * (p.M - 1)) * y * y;
        if (lhs > rhs) continue;
        const Rational Q = qd.Q({x, y});
        if (-Q >= order) continue;
        const BigInt s = e1 * n - e2 * nu;
        neg[Q] += Rational((s % 2 == 0) ? 1 : -1) * (lhs == rhs ? make_rational(1, 2) : Rational(1));
      }
    }
    for (const auto& [e, c] : neg) N = std::lcm(N, to_ll(denominator(e)));
  }
  t.N = N;
  {
    // positive terms exist below N (alpha + order), negative ones above -N order
    const Rational pos = Rational(N) * upto;
    long long c = to_ll(ceil_of(pos)) - 1;
    if (include_negative) c = std::min(c, to_ll(ceil_of(Rational(N) * order)) - 1);
    t.complete_to = std::max(1LL, c);
  }
  for (const auto& [m, c] : S.terms()) t.coeffs[m * (N / S.denom())] = fp.scale * Rational(c);
  for (const auto& [e, c] : neg)
    if (c != 0) t.coeffs[to_ll(numerator(e * Rational(N)))] = fp.scale * c;
  return t;
}

/// F_j(k, l; q) below q^{order} recovered from the positive coefficients of a family table.
inline QQSeries family_coeffs_from_table(const MaassCoeffTable& t, const FamilyId& id, const Rational& order) {
  const FamilyParams fp = param_table(id);
  std::vector<QQSeries::Term> terms;
  for (const auto& [n, c] : t.coeffs) {
    if (n <= 0) continue;
    // n / N = alpha + d m
    const Rational m = (make_rational(n, t.N) - fp.alpha) / Rational(fp.d);
    if (!is_integer(m)) throw std::logic_error("table coefficient off the family's exponent lattice");
    if (m < order) terms.emplace_back(to_ll(numerator(m)), c);
  }
  return QQSeries::from_terms(1, std::move(terms), order);
}

/// Raised when a coefficient table does not reach the requested cut.
struct InsufficientTableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WaveformValue {
  std::complex<double> value;
  double tail_bound = 0;
};

namespace detail {

inline std::complex<double> e_rat(const Rational& w) {
  return std::polar(1.0, 2 * std::numbers::pi * to_double(frac_of(w)));
}

}  // namespace detail

/// Truncated Fourier sum over 0 < |n| <= n_cut. The tail bound assumes
/// |A(n)| <= max|A| * |n| / n_cut beyond the cut.
inline WaveformValue eval_waveform(const MaassCoeffTable& t, std::complex<double> tau, long long n_cut) {
  const double u = tau.real(), v = tau.imag();
  if (!(v > 0)) throw std::invalid_argument("eval_waveform needs Im tau > 0");
  if (n_cut > t.extent() && t.extent() > 0)
    throw InsufficientTableError("table extent " + std::to_string(t.extent()) + " is below n_cut " +
                                 std::to_string(n_cut));
  const double N = static_cast<double>(t.N);
  // e(n u / N) with n u / N reduced exactly when u is a dyadic double
  std::complex<double> s = 0;
  double amax = 0;
  for (const auto& [n, c] : t.coeffs) {
    if (n == 0 || std::llabs(n) > n_cut) continue;
    const double a = to_double(c);
    amax = std::max(amax, std::abs(a));
    const double arg = 2 * std::numbers::pi * static_cast<double>(std::llabs(n)) * v / N;
    const double k = arg < 745 ? k0_bessel(arg) : 0.0;
    if (k == 0) continue;
    const double ph = static_cast<double>(n) * u / N;
    s += a * k * std::polar(1.0, 2 * std::numbers::pi * (ph - std::floor(ph)));
  }
  WaveformValue r;
  const double sv = std::sqrt(v);
  r.value = sv * s;
  if (t.kappa1 != 0 || t.kappa2 != 0) r.value += sv * (t.kappa1 + t.kappa2 * std::log(v));
  double tail = 0;
  for (long long n = n_cut + 1;; ++n) {
    const double arg = 2 * std::numbers::pi * static_cast<double>(n) * v / N;
    if (arg > 745) break;
    const double term = 2 * amax * static_cast<double>(n) / static_cast<double>(std::max(1LL, n_cut)) * k0_bessel(arg);
    tail += term;
    if (term < 1e-30 * std::max(1.0, tail) && n > n_cut + 10) break;
  }
  r.tail_bound = sv * tail;
  return r;
}

struct CohenResidual {
  std::complex<double> fricke;      // f(-1/(2 tau)) - conj f(tau)
  std::complex<double> translation; // f(tau + 1) - e(1/24) f(tau)
  double tail_bound = 0;
};

inline CohenResidual cohen_transform_residual(std::complex<double> tau, long long n_cut) {
  const MaassCoeffTable t = cohen_table(n_cut);
  const std::complex<double> w = -1.0 / (2.0 * tau);
  const auto f = eval_waveform(t, tau, n_cut), fw = eval_waveform(t, w, n_cut), f1 = eval_waveform(t, tau + 1.0, n_cut);
  CohenResidual r;
  r.fricke = fw.value - std::conj(f.value);
  r.translation = f1.value - detail::e_rat(make_rational(1, 24)) * f.value;
  r.tail_bound = f.tail_bound + fw.tail_bound + f1.tail_bound;
  return r;
}

// ---------------------------------------------------------------------------
// Values at roots of unity

/// "p" or "p/q" for rational values, otherwise the coefficient vector in powers of zeta_N.
inline std::string cyc_display(const CycNumber& c) {
  Rational r;
  if (c.is_rational(&r)) return to_string(r);
  return ring_traits<CycNumber>::str(c);
}

struct QuantumSample {
  Rational x;  // h/m in lowest terms
  CycNumber exact;
  std::complex<double> value;

  nlohmann::json to_json() const {
    return {{"x", to_fraction_string(x)}, {"exact", cyc_display(exact)},
            {"value_re", value.real()}, {"value_im", value.imag()}};
  }
};

/// F_j(k, l; zeta) at zeta = e(x). The Pochhammer factor in every term vanishes
/// once n reaches the order of zeta (of zeta^2 for j = 2), so the sum is finite.
inline QuantumSample quantum_value(const FamilyId& id, const Rational& x) {
  id.validate();
  const long long m = to_ll(denominator(x));
  const long long h = to_ll(numerator(x) % denominator(x));
  const detail::ModCyclic R{m};
  auto total = R.zero();
  const long long k = id.k, l = id.l;
  auto poly_of = [](const PochSpec& s, long long n) {
    long long deg = 0;
    for (long long i = 0; i < n; ++i) deg += s.shift + i * s.step;
    return pochhammer_dense(s, n, static_cast<std::size_t>(deg + 1));
  };
  auto add_term = [&](long long sign, long long shift, const detail::Dense<BigInt>& poly) {
    auto v = R.from_dense(poly, h);
    auto mono = R.zero();
    mono[R.idx(h * shift)] = sign;
    v = R.mul(v, mono);
    for (std::size_t i = 0; i < v.size(); ++i) total[i] += v[i];
  };
  const std::size_t full = std::numeric_limits<std::size_t>::max();
  switch (id.j) {
    case 1:
      for (long long n = 0; n < m; ++n)
        add_term(n % 2 == 0 ? 1 : -1, n * (n + 1) / 2,
                 detail::mul(poly_of(PochSpec::q(), n), detail::full_poly(hpoly({k, l, 0, n})), full));
      break;
    case 2: {
      const long long ord2 = m % 2 == 0 ? m / 2 : m;
      for (long long n = 0; n < ord2; ++n)
        add_term(n % 2 == 0 ? 1 : -1, 0,
                 detail::mul(poly_of(PochSpec::q2q2(), n), detail::full_poly(hpoly({k, l, 0, n})), full));
      break;
    }
    default:
      for (long long n = 1; n <= m; ++n) {
        auto t = detail::mul(poly_of(PochSpec::q(), n - 1), detail::full_poly(hpoly({k, l, 1, n})), full);
        if (id.j == 4) t = detail::mul(t, poly_of(PochSpec::minus_one(), n), full);
        add_term(n % 2 == 0 ? 1 : -1, id.j == 3 ? n * (n + 1) / 2 : n, t);
      }
      break;
  }
  QuantumSample q;
  q.x = make_rational(h, m);
  q.exact = R.value(total);
  q.value = q.exact.to_complex();
  return q;
}

struct RadialReport {
  FamilyId id;
  Rational x;
  std::vector<double> t_grid;
  std::vector<std::complex<double>> values;
  std::complex<double> extrapolated;
  std::complex<double> quantum;
  double error = 0;          // |extrapolated - quantum|
  double instability = 0;   // |last two diagonal Richardson entries|
  double tolerance = 1e-4;
  bool pass = false;

  VerificationReport as_verification() const {
    VerificationReport r;
    r.check = "radial";
    r.params = id.to_json();
    r.params["x"] = to_fraction_string(x);
    r.pass = pass;
    r.details = {{"extrapolated_re", extrapolated.real()}, {"extrapolated_im", extrapolated.imag()},
                 {"quantum_re", quantum.real()},       {"quantum_im", quantum.imag()},
                 {"error", error},                     {"instability", instability},
                 {"tolerance", tolerance},             {"points", t_grid.size()}};
    return r;
  }
};

/// Geometric grid t_i = t0 2^{-i}, i < count.
inline std::vector<double> default_t_grid(double t0 = 0.05, int count = 8) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(t0 * std::ldexp(1.0, -i));
  return g;
}

/// F_j(k, l; e(x) e^{-t}) from the lattice form, with terms dropped once e^{-t e} < 1e-20.
inline std::complex<double> family_value_inside(const FamilyId& id, const Rational& x, double t) {
  if (!(t > 0)) throw std::invalid_argument("radial evaluation needs t > 0");
  const long long m = to_ll(denominator(x)), h = to_ll(numerator(x) % denominator(x));
  const long long T = static_cast<long long>(std::ceil(46.0 / t)) + 1;
  std::vector<std::complex<long double>> roots(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i)
    roots[static_cast<std::size_t>(i)] = std::polar(1.0L, 2 * std::numbers::pi_v<long double> * static_cast<long double>(i) / m);
  std::complex<long double> s = 0;
  const long double lt = t;
  detail::for_each_prop32_term(id, T, [&](long long e, long long c) {
    const long long r = ((h % m) * (e % m)) % m;
    s += static_cast<long double>(c) * std::exp(-lt * static_cast<long double>(e)) *
         roots[static_cast<std::size_t>(r < 0 ? r + m : r)];
  });
  if (id.j == 2) s *= 0.5L;
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

/// Values along e(x) e^{-t} extrapolated to t = 0 (Richardson, assuming an
/// expansion in integral powers of t on a grid of ratio 1/2) and compared
/// with the exact root-of-unity value.
/// An empty grid selects t_i = 0.05 m^{-2} 2^{-i}, i < 8, for x = h/m.
inline RadialReport radial_limit_check(const FamilyId& id, const Rational& x, std::vector<double> t_grid = {},
                                       double tol = 1e-4) {
  if (t_grid.empty()) {
    const double m = to_double(Rational(denominator(x)));
    t_grid = default_t_grid(0.05 / (m * m));
  }
  if (t_grid.size() < 2) throw std::invalid_argument("radial_limit_check needs at least two grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (std::abs(t_grid[i] * 2 - t_grid[i - 1]) > 1e-12 * t_grid[i - 1])
      throw std::invalid_argument("radial_limit_check needs a grid of ratio 1/2");
  RadialReport r;
  r.id = id;
  r.x = make_rational(to_ll(numerator(x) % denominator(x)), to_ll(denominator(x)));
  r.t_grid = t_grid;
  r.tolerance = tol;
  for (double t : t_grid) r.values.push_back(family_value_inside(id, x, t));
  std::vector<std::vector<std::complex<double>>> R(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    R[i].push_back(r.values[i]);
    for (std::size_t k = 1; k <= i; ++k) {
      const double f = std::ldexp(1.0, static_cast<int>(k));
      R[i].push_back((f * R[i][k - 1] - R[i - 1][k - 1]) / (f - 1));
    }
  }
  const std::size_t n = t_grid.size() - 1;
  r.extrapolated = R[n][n];
  r.instability = std::abs(R[n][n] - R[n - 1][n - 1]);
  r.quantum = quantum_value(id, x).value;
  r.error = std::abs(r.extrapolated - r.quantum);
  r.pass = r.error <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// Cocycles

using PositivePart = std::function<std::complex<double>(const Rational&)>;

/// F^+(x) = e(x/24) sigma(e(x)) with sigma(q) = 1 + sum_{n >= 0} (-1)^n q^{n+1} (q)_n,
/// a finite sum at roots of unity.
inline PositivePart cohen_positive_part() {
  return [](const Rational& x) {
    const long long m = to_ll(denominator(x)), h = to_ll(numerator(x) % denominator(x));
    const detail::ModCyclic R{m};
    auto total = R.zero();
    total[0] += 1;
    for (long long n = 0; n < m; ++n) {
      auto v = R.from_dense(pochhammer_dense(PochSpec::q(), n, static_cast<std::size_t>(n * (n + 1) / 2 + 1)), h);
      auto mono = R.zero();
      mono[R.idx(h * (n + 1))] = n % 2 == 0 ? 1 : -1;
      v = R.mul(v, mono);
      for (std::size_t i = 0; i < v.size(); ++i) total[i] += v[i];
    }
    return detail::e_rat(x / 24) * R.value(total).to_complex();
  };
}

/// F^+(x) = e(alpha x) F_j(k, l; e(d x)).
inline PositivePart family_positive_part(const FamilyId& id) {
  const FamilyParams fp = param_table(id);
  return [fp](const Rational& x) { return detail::e_rat(fp.alpha * x) * quantum_value(fp.id, Rational(fp.d) * x).value; };
}

struct CocycleSample {
  Rational x, gx;
  std::complex<double> fplus_x, fplus_gx, value;
};

struct CocycleResult {
  std::vector<CocycleSample> samples;
  double max_second_difference = 0;  // divided second differences of the values over xs
};

/// r(x) = F^+(x) - chi ((cx + d)/sqrt(det))^{-1} F^+(gamma x) for each x, with
/// F^+(gamma x) conjugated for transformations that conjugate the form.
inline CocycleResult cocycle_samples(const PositivePart& fplus, const Mat2& g, const std::vector<Rational>& xs,
                                     std::complex<double> chi = 1.0, bool conjugate = false) {
  const long long det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (det <= 0) throw std::invalid_argument("cocycle matrix needs positive determinant");
  CocycleResult res;
  for (const auto& x : xs) {
    const Rational den = Rational(g[1][0]) * x + Rational(g[1][1]);
    if (den == 0) throw std::invalid_argument("x = " + to_fraction_string(x) + " is the pole of the cocycle");
    CocycleSample s;
    s.x = x;
    s.gx = (Rational(g[0][0]) * x + Rational(g[0][1])) / den;
    s.fplus_x = fplus(x);
    s.fplus_gx = fplus(s.gx);
    const std::complex<double> fg = conjugate ? std::conj(s.fplus_gx) : s.fplus_gx;
    s.value = s.fplus_x - chi * fg * (std::sqrt(static_cast<double>(det)) / to_double(den));
    res.samples.push_back(s);
  }
  for (std::size_t i = 1; i + 1 < res.samples.size(); ++i) {
    const double x0 = to_double(res.samples[i - 1].x), x1 = to_double(res.samples[i].x), x2 = to_double(res.samples[i + 1].x);
    const auto d1 = (res.samples[i].value - res.samples[i - 1].value) / (x1 - x0);
    const auto d2 = (res.samples[i + 1].value - res.samples[i].value) / (x2 - x1);
    res.max_second_difference = std::max(res.max_second_difference, std::abs(2.0 * (d2 - d1) / (x2 - x0)));
  }
  return res;
}

/// Twist for the cocycle of a table: chi and whether F^+(gamma x) is conjugated.
struct CocycleTwist {
  std::complex<double> chi = 1.0;
  bool conjugate = false;
};

/// Twists known for a table. Cohen's form satisfies f(tau + 1) = e(1/24) f(tau)
/// and f(-1/(2 tau)) = conj f(tau); on positive parts the latter pairs with
/// chi = -1. Other matrices need an explicit twist.
inline std::optional<CocycleTwist> known_twist(const MaassCoeffTable& t, const Mat2& g) {
  if (g == Mat2{{{1, 0}, {0, 1}}}) return CocycleTwist{};
  if (t.source != MaassCoeffTable::Source::cohen) return std::nullopt;
  if (g == Mat2{{{1, 1}, {0, 1}}}) return CocycleTwist{detail::e_rat(make_rational(-1, 24)), false};
  if (g == Mat2{{{0, -1}, {2, 0}}}) return CocycleTwist{-1.0, true};
  return std::nullopt;
}

inline PositivePart positive_part(const MaassCoeffTable& t) {
  switch (t.source) {
    case MaassCoeffTable::Source::cohen: return cohen_positive_part();
    case MaassCoeffTable::Source::family: return family_positive_part(t.family);
    default: throw std::invalid_argument("cocycle sampling needs a table with a known positive part");
  }
}

inline CocycleResult cocycle_samples(const MaassCoeffTable& t, const Mat2& g, const std::vector<Rational>& xs,
                                     std::optional<CocycleTwist> twist = std::nullopt) {
  if (!twist) twist = known_twist(t, g);
  if (!twist) throw std::invalid_argument("no known multiplier for this matrix; supply the twist explicitly");
  return cocycle_samples(positive_part(t), g, xs, twist->chi, twist->conjugate);
}

}  // namespace qmaass
