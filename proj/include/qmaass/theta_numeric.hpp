#pragma once

// Floating-point evaluation of the eigenfunction Phi_{a,b} and of the
// completion terms phi^{c_1} - phi^{c_2} for the form of theta.hpp.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>

#include "qmaass/bessel.hpp"
#include "qmaass/theta.hpp"

namespace qmaass {

namespace detail {

inline double frac_part(double x) { return x - std::floor(x); }

/// e(w) for w given as an exact rational reduced mod 1 before rounding.
inline std::complex<double> e_frac(const Rational& w) {
  const double f = to_double(frac_of(w));
  return std::polar(1.0, 2 * std::numbers::pi * f);
}

/// Lattice point r = a + (n, nu) with its exact phase e(B(r, b)), Q(r) and the
/// cone weights rho_A(r), rho_A^perp(r) in {0, 1/2, 1}.
struct LatticePoint {
  double x, y;
  Rational Q;
  std::complex<double> phase_b;
  double rho, rho_perp;
};

inline int rsgn(const Rational& v) { return (v > 0) - (v < 0); }

/// B(r,c_1)B(r,c_2) has the sign of y^2 - x^2; the perpendicular pair
/// (1, -1), (1, 1) gives (M+1)^2 x^2 - (M-1)^2 y^2.
inline double rho_cone(const Rational& x, const Rational& y) { return 0.5 * (1 - rsgn(y * y - x * x)); }
inline double rho_perp_cone(long long M, const Rational& x, const Rational& y) {
  return 0.5 * (1 - rsgn(Rational((M + 1) * (M + 1)) * x * x - Rational((M - 1) * (M - 1)) * y * y));
}

template <class F>
void for_each_lattice_point(const ThetaParams& p, long long cut, F&& f) {
  const QuadraticData qd(p.M);
  const Rational bab = qd.B(p.a, p.b);
  const Rational b1 = Rational(p.M + 1) * p.b[0], b2 = Rational(p.M - 1) * p.b[1];
  // ascending shells for a fixed reduction order
  for (long long m = 0; m <= cut; ++m)
    for (long long n = -m; n <= m; ++n)
      for (long long nu = -m; nu <= m; ++nu) {
        if (std::max(std::llabs(n), std::llabs(nu)) != m) continue;
        const Vec2 r{Rational(n) + p.a[0], Rational(nu) + p.a[1]};
        const Rational ph = bab + b1 * Rational(n) - b2 * Rational(nu);
        f(LatticePoint{to_double(r[0]), to_double(r[1]), qd.Q(r), e_frac(ph), rho_cone(r[0], r[1]),
                       rho_perp_cone(p.M, r[0], r[1])});
      }
}

inline int sgn(double v) { return (v > 0) - (v < 0); }

}  // namespace detail

struct PhiResult {
  std::complex<double> value;
  /// e(-B(a, b)) * value, whose positive part is S_{a,b;M}.
  std::complex<double> normalized;
  double tail_bound = 0;
  bool converged = true;
  long long terms = 0;
};

/// Phi_{a,b}(tau) summed over max(|n|, |nu|) <= lattice_cut.
inline PhiResult phi_numeric(const ThetaParams& p, std::complex<double> tau, long long lattice_cut, double tol = 1e-12) {
  p.validate();
  const double u = tau.real(), v = tau.imag();
  if (!(v > 0)) throw std::invalid_argument("phi_numeric needs Im tau > 0");
  const double Mp = static_cast<double>(p.M + 1), Mm = static_cast<double>(p.M - 1);
  std::complex<double> sum = 0;
  PhiResult res;
  detail::for_each_lattice_point(p, lattice_cut, [&](const detail::LatticePoint& pt) {
    const double rho = pt.rho, rho_perp = pt.rho_perp;
    const double Q = to_double(pt.Q);
    const std::complex<double> ph = pt.phase_b * std::polar(1.0, 2 * std::numbers::pi * detail::frac_part(Q * u));
    if (rho != 0 && Q > 0) sum += rho * ph * k0_bessel(2 * std::numbers::pi * Q * v);
    if (rho_perp != 0 && Q < 0) sum += rho_perp * ph * k0_bessel(-2 * std::numbers::pi * Q * v);
    ++res.terms;
  });
  // t_2 - t_1 > 0
  res.value = std::sqrt(v) * sum;
  const QuadraticData qd(p.M);
  res.normalized = detail::e_frac(-qd.B(p.a, p.b)) * res.value;
  // beyond the cut: Q >= (m-1)^2 on the first cone and |Q| >= (M-1)/(M+1) (m-1)^2 on the second
  const double kappa = Mm / Mp;
  double tail = 0;
  for (long long m = lattice_cut + 1; m <= lattice_cut + 200; ++m) {
    const double arg = 2 * std::numbers::pi * v * kappa * static_cast<double>((m - 1) * (m - 1));
    if (arg <= 0) {
      tail = std::numeric_limits<double>::infinity();
      break;
    }
    const double t = 8.0 * static_cast<double>(m) * k0_bessel(arg);
    tail += t;
    if (t < 1e-300) break;
  }
  res.tail_bound = std::sqrt(v) * tail;
  res.converged = res.tail_bound <= tol;
  return res;
}

/// The point c(t) = (sqrt(2/(M+1)) sinh t, sqrt(2/(M-1)) cosh t) and t_1 = -s, t_2 = s
/// with sinh s = sqrt((M-1)/2).
inline double completion_parameter(long long M, int l) {
  const double s = std::asinh(std::sqrt((static_cast<double>(M) - 1) / 2));
  return l == 1 ? -s : s;
}

struct CompletionResult {
  std::complex<double> value;  // phi^{c_1} - phi^{c_2}
  std::complex<double> phi_c1, phi_c2;
  double tail_bound = 0;
  double quad_error = 0;
  bool ok = true;
};

namespace detail {

/// e^{-2 pi Q v} alpha_t(r sqrt(v)) with Q = p1 p2, B(r, c(x)) = p2 e^x - p1 e^{-x}.
/// The Gaussian prefactor is taken out so that nothing overflows; the
/// remaining integral is over [0, inf) after scaling by its initial slope.
/// `case_sign` is the sign of B(r, c) B(r, c_perp) when known exactly; otherwise
/// it is taken from the floating-point values.
inline double completion_weight(double p1, double p2, double t, double v, double quad_tol, double* err,
                                std::optional<int> case_sign = std::nullopt) {
  const double et = std::exp(t), emt = std::exp(-t);
  const double g = p2 * et - p1 * emt, gp = p2 * et + p1 * emt;
  const double s = g * gp;
  const int cs = case_sign ? *case_sign : sgn(s);
  if (cs == 0) return 0;
  const double log_pref = -std::numbers::pi * v * (p2 * p2 * et * et + p1 * p1 * emt * emt);
  if (log_pref < -700) return 0;
  const double dir = cs > 0 ? 1.0 : -1.0;
  const double L = 1.0 / (1.0 + 2 * std::numbers::pi * v * std::abs(s));
  auto f = [&](double w) {
    const double x = t + dir * L * w;
    const double gx = p2 * std::exp(x) - p1 * std::exp(-x);
    const double d = gx * gx - g * g;
    return std::exp(-std::numbers::pi * v * std::max(0.0, d));
  };
  double e = 0;
  const double J = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 15, quad_tol, &e);
  const double pref = std::exp(log_pref);
  if (err) *err += pref * L * e;
  return dir * pref * L * J;
}

}  // namespace detail

/// phi^{c_l}_{a,b}(tau), l in {1, 2}, over max(|n|, |nu|) <= lattice_cut. The
/// case distinction of alpha_t is decided in exact arithmetic, since lattice
/// points with B(r, c_l^perp) = 0 do occur. Quadrature error estimates are
/// accumulated into *err.
inline std::complex<double> phi_c_numeric(const ThetaParams& p, std::complex<double> tau, int l, long long lattice_cut,
                                          double quad_tol = 1e-10, double* err = nullptr) {
  const double u = tau.real(), v = tau.imag();
  if (!(v > 0)) throw std::invalid_argument("completion terms need Im tau > 0");
  if (l != 1 && l != 2) throw std::invalid_argument("completion terms are indexed by l in {1, 2}");
  const double t = completion_parameter(p.M, l);
  const double sp = std::sqrt(static_cast<double>(p.M + 1)), sm = std::sqrt(static_cast<double>(p.M - 1));
  const QuadraticData qd(p.M);
  // c_l is a positive multiple of ((-1)^l (M-1), M+1); c_1^perp = (1, -1), c_2^perp = (1, 1)
  const Vec2 cl{Rational(l == 2 ? p.M - 1 : 1 - p.M), Rational(p.M + 1)};
  const Vec2 cp{Rational(1), Rational(l == 2 ? 1 : -1)};
  std::complex<double> s = 0;
  double qerr = 0;
  for (long long m = 0; m <= lattice_cut; ++m)
    for (long long n = -m; n <= m; ++n)
      for (long long nu = -m; nu <= m; ++nu) {
        if (std::max(std::llabs(n), std::llabs(nu)) != m) continue;
        const Vec2 r{Rational(n) + p.a[0], Rational(nu) + p.a[1]};
        const Rational prod = qd.B(r, cl) * qd.B(r, cp);
        const int cs = prod > 0 ? 1 : prod < 0 ? -1 : 0;
        if (cs == 0) continue;
        const double x = to_double(r[0]), y = to_double(r[1]);
        const double p1 = (sp * x + sm * y) / std::numbers::sqrt2;
        const double p2 = (sp * x - sm * y) / std::numbers::sqrt2;
        const double w = detail::completion_weight(p1, p2, t, v, quad_tol, &qerr, cs);
        if (w == 0) continue;
        const Rational Q = qd.Q(r);
        const std::complex<double> ph = detail::e_frac(qd.B(r, p.b)) *
                                        std::polar(1.0, 2 * std::numbers::pi * detail::frac_part(to_double(Q) * u));
        s += w * ph;
      }
  if (err) *err += std::sqrt(v) * qerr;
  return std::sqrt(v) * s;
}

/// phi^{c_1}_{a,b}(tau) - phi^{c_2}_{a,b}(tau) over max(|n|, |nu|) <= lattice_cut.
inline CompletionResult completion_numeric(const ThetaParams& p, std::complex<double> tau, long long lattice_cut,
                                           double quad_tol = 1e-10) {
  p.validate();
  const double v = tau.imag();
  const double t1 = completion_parameter(p.M, 1);
  CompletionResult res;
  double qerr = 0;
  res.phi_c1 = phi_c_numeric(p, tau, 1, lattice_cut, quad_tol, &qerr);
  res.phi_c2 = phi_c_numeric(p, tau, 2, lattice_cut, quad_tol, &qerr);
  res.value = res.phi_c1 - res.phi_c2;
  res.quad_error = qerr;
  const double rv = std::sqrt(v);
  // Gaussian domination: prefactor <= exp(-pi v e^{-2|t|} (M-1) max(|x|,|y|)^2), integral <= 1
  const double kappa = std::numbers::pi * v * std::exp(-2 * std::abs(t1)) * static_cast<double>(p.M - 1);
  double tail = 0;
  for (long long m = lattice_cut + 1; m <= lattice_cut + 200; ++m) {
    const double t = 16.0 * static_cast<double>(m) * std::exp(-kappa * static_cast<double>((m - 1) * (m - 1)));
    tail += t;
    if (t < 1e-300) break;
  }
  res.tail_bound = rv * tail;
  res.ok = res.quad_error <= std::max(quad_tol, 1e-12) * 100 && std::isfinite(std::abs(res.value));
  return res;
}

}  // namespace qmaass
