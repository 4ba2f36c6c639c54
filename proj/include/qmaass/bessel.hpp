#pragma once

// K_0 for positive real arguments.

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmaass {

namespace detail {

// -(log(x/2) + gamma) I_0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 H_k
inline double k0_series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0, i0 = 1.0, rest = 0.0, h = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * static_cast<double>(k));
    h += 1.0 / k;
    i0 += term;
    rest += term * h;
    if (term * h < 1e-18 * rest) break;
  }
  return -(std::log(0.5 * x) + std::numbers::egamma) * i0 + rest;
}

// e^{-x} * trapezoid rule for int_0^inf e^{-x (cosh t - 1)} dt
inline double k0_integral(double x) {
  const double h = 0.125;
  double s = 0.5;
  for (int i = 1;; ++i) {
    const double t = h * i;
    const double v = std::exp(-x * (std::cosh(t) - 1.0));
    s += v;
    if (v < 1e-18 * s) break;
  }
  return std::exp(-x) * h * s;
}

// sqrt(pi/(2x)) e^{-x} sum_k (-1)^k ((2k-1)!!)^2 / (k! (8x)^k), cut at the smallest term
inline double k0_asymptotic(double x) {
  double term = 1.0, s = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = -term * (2.0 * k - 1) * (2.0 * k - 1) / (8.0 * x * k);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    s += term;
    if (std::abs(term) < 1e-17 * std::abs(s)) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * s;
}

}  // namespace detail

/// Modified Bessel function K_0(x), x > 0.
inline double k0_bessel(double x) {
  if (!(x > 0)) throw std::domain_error("K_0 needs x > 0");
  if (x <= 2.0) return detail::k0_series(x);
  if (x < 25.0) return detail::k0_integral(x);
  return detail::k0_asymptotic(x);
}

}  // namespace qmaass
