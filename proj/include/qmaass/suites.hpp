#pragma once

// Named verification suites. Checks run on QMAASS_THREADS workers; reports
// come back in the order the checks were listed.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qmaass/bailey.hpp"
#include "qmaass/fser.hpp"
#include "qmaass/hpoly.hpp"
#include "qmaass/maass.hpp"
#include "qmaass/theta.hpp"
#include "qmaass/theta_numeric.hpp"

namespace qmaass {

struct SuiteConfig {
  std::optional<Rational> order;  // suite default when absent
  std::optional<long long> kmax, nmax;
  std::optional<FamilyId> family;  // restricts the family sweeps
  long long n_cut = 5000;
  long long lattice_cut = 12;
  std::complex<double> tau{0.0, 1.0};
  double tolerance = 1e-8;
};

using Check = std::function<VerificationReport()>;

/// Worker count from QMAASS_THREADS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* s = std::getenv("QMAASS_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs the checks concurrently; a check that throws becomes a failing report.
inline std::vector<VerificationReport> run_checks(const std::vector<std::pair<std::string, Check>>& checks,
                                                  unsigned workers = worker_count()) {
  std::vector<VerificationReport> out(checks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      try {
        out[i] = checks[i].second();
      } catch (const std::exception& e) {
        out[i].check = checks[i].first;
        out[i].pass = false;
        out[i].details["error"] = e.what();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(checks.size())));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"ag",   "sigma",      "bailey", "prop32",  "params",
                                              "thm1", "completion", "cohen",  "duality"};
  return names;
}

namespace detail {

inline std::vector<FamilyId> family_sweep(const SuiteConfig& c, long long kmax_default) {
  if (c.family) return {*c.family};
  std::vector<FamilyId> ids;
  const long long kmax = c.kmax.value_or(kmax_default);
  for (int j = 1; j <= 4; ++j)
    for (long long k = 1; k <= kmax; ++k)
      for (long long l = 1; l <= k; ++l) ids.push_back({j, k, l});
  return ids;
}

inline VerificationReport numeric_report(std::string check, nlohmann::json params, double value, double tol,
                                         double tail_bound = 0) {
  VerificationReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.pass = std::isfinite(value) && value < tol;
  r.details = {{"value", value}, {"tolerance", tol}, {"tail_bound", tail_bound}};
  // the estimate of what was left out already exceeds the budget
  if (!r.pass && tail_bound >= tol) r.details["precision_failure"] = true;
  return r;
}

inline nlohmann::json tau_json(std::complex<double> t) { return {{"tau_re", t.real()}, {"tau_im", t.imag()}}; }

}  // namespace detail

/// The checks of one suite, in report order.
inline std::vector<std::pair<std::string, Check>> suite_checks(const std::string& name, const SuiteConfig& c) {
  std::vector<std::pair<std::string, Check>> out;
  auto add = [&](std::string n, Check f) { out.emplace_back(std::move(n), std::move(f)); };
  if (name == "ag") {
    const long long kmax = c.kmax.value_or(3), nmax = c.nmax.value_or(8);
    for (long long k = 2; k <= kmax; ++k)
      for (long long l = 1; l <= k; ++l)
        for (int b : {0, 1})
          for (long long n = b; n <= nmax; ++n) add("ag", [=] { return verify_ag_relation({k, l, b, n}); });
  } else if (name == "sigma") {
    const Rational T = c.order.value_or(Rational(200));
    for (SigmaRep r : {SigmaRep::alternating, SigmaRep::averaged, SigmaRep::indefinite})
      add("sigma_rep", [=] {
        return compare_series("sigma_rep", {{"rep", to_string(r)}, {"order", to_string(T)}},
                              sigma_series(SigmaRep::pochhammer, T), sigma_series(r, T), T);
      });
    add("sigma_star_rep", [=] {
      return compare_series("sigma_star_rep", {{"order", to_string(T)}}, sigma_star_series(SigmaStarRep::odd_pochhammer, T),
                            sigma_star_series(SigmaStarRep::alternating, T), T);
    });
    add("special_f2", [=] {
      const QQSeries lhs = f_series({2, 1, 1}, T).scaled(Rational(2));
      const QQSeries rhs = to_rational_series(sigma_series(SigmaRep::pochhammer, T / 2 + 1).compose_power(Rational(2)));
      return compare_series("special_f2", {{"order", to_string(T)}}, lhs, rhs, T);
    });
    add("special_f4", [=] {
      const QQSeries lhs = f_series({4, 1, 1}, T);
      const QQSeries rhs = to_rational_series(-sigma_star_series(SigmaStarRep::alternating, T).negate_variable());
      return compare_series("special_f4", {{"order", to_string(T)}}, lhs, rhs, T);
    });
  } else if (name == "bailey") {
    const long long kmax = c.kmax.value_or(3), nmax = c.nmax.value_or(12);
    const Rational T = c.order.value_or(Rational(60));
    for (long long k = 1; k <= kmax; ++k)
      for (long long l = 1; l <= k; ++l) {
        add("bailey_pair", [=] { return verify_pair(pair_relative_one(k, l), nmax, Rational(100)); });
        add("bailey_pair", [=] { return verify_pair(pair_relative_q(k, l), nmax, Rational(100)); });
      }
    for (long long k = 1; k <= kmax; ++k)
      for (long long l = 1; l <= k; ++l)
        for (LimitingIdentity w : {LimitingIdentity::one_infinite, LimitingIdentity::one_minus_one})
          add("bailey_limit", [=] { return verify_limiting_identity(pair_relative_one(k, l), w, T); });
    for (long long k = 1; k <= kmax; ++k)
      for (long long l = 1; l <= k; ++l)
        for (LimitingIdentity w : {LimitingIdentity::q_infinite, LimitingIdentity::q_minus_q})
          add("bailey_limit", [=] { return verify_limiting_identity(pair_relative_q(k, l), w, T); });
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
      for (Relative rel : {Relative::one, Relative::q})
        add("bailey_limit", [=] {
          const BaileyPair p = random_synthetic_pair(rel, seed);
          VerificationReport agg;
          agg.check = "bailey_limit";
          agg.params = {{"pair", p.label}, {"relative", to_string(rel)}, {"order", to_string(T)}};
          for (const auto& r : verify_limiting_identities(p, T))
            if (!r.pass) return r;
          return agg;
        });
    for (long long n = 0; n <= nmax; ++n) add("q_binomial", [=] { return verify_q_binomial_theorem(n); });
  } else if (name == "prop32") {
    const Rational T = c.order.value_or(Rational(100));
    for (const auto& id : detail::family_sweep(c, 3)) add("prop32", [=] { return verify_prop32(id, T); });
  } else if (name == "params") {
    for (const auto& id : detail::family_sweep(c, 10))
      add("params", [=] { return validate_params(id).as_verification(); });
  } else if (name == "thm1") {
    const Rational T = c.order.value_or(Rational(60));
    for (const auto& id : detail::family_sweep(c, 3)) add("thm1", [=] { return verify_thm1(id, T); });
  } else if (name == "completion") {
    for (const auto& id : detail::family_sweep(c, 1))
      add("completion", [=] {
        const CompletionResult r = completion_numeric(param_table(id).theta, c.tau, c.lattice_cut);
        nlohmann::json p = id.to_json();
        p.update(detail::tau_json(c.tau));
        p["lattice_cut"] = c.lattice_cut;
        auto rep = detail::numeric_report("completion", p, std::abs(r.value) + r.tail_bound, c.tolerance, r.tail_bound);
        rep.details["quad_error"] = r.quad_error;
        if (!r.ok) {
          rep.pass = false;
          rep.details["precision_failure"] = true;
        }
        return rep;
      });
  } else if (name == "cohen") {
    const long long n = c.n_cut;
    for (std::complex<double> tau : {std::complex<double>(0, 1), std::complex<double>(1.0 / 3, 0.5)}) {
      add("cohen_fricke", [=] {
        const auto r = cohen_transform_residual(tau, n);
        nlohmann::json p = detail::tau_json(tau);
        p["n_cut"] = n;
        return detail::numeric_report("cohen_fricke", p, std::abs(r.fricke), 1e-6, r.tail_bound);
      });
      add("cohen_translation", [=] {
        const auto r = cohen_transform_residual(tau, n);
        nlohmann::json p = detail::tau_json(tau);
        p["n_cut"] = n;
        return detail::numeric_report("cohen_translation", p, std::abs(r.translation), 1e-12);
      });
    }
    add("cohen_real", [=] {
      const std::complex<double> tau(0, 1 / std::numbers::sqrt2);
      const auto w = eval_waveform(cohen_table(n), tau, n);
      nlohmann::json p = detail::tau_json(tau);
      p["n_cut"] = n;
      return detail::numeric_report("cohen_real", p, std::abs(w.value.imag()), 1e-8, w.tail_bound);
    });
  } else if (name == "duality") {
    const long long kmax = c.kmax.value_or(3), nmax = c.nmax.value_or(12);
    for (long long k = 1; k <= kmax; ++k)
      for (long long l = 1; l <= k; ++l)
        for (long long N = 1; N <= nmax; ++N)
          add("duality", [=] {
            VerificationReport r;
            r.check = "duality";
            r.params = {{"k", k}, {"l", l}, {"N", N}};
            const CycNumber a = kz_eval_root(k, l, N), b = u_eval_root(k, l, N);
            r.pass = a == b;
            r.lhs_coeff = ring_traits<CycNumber>::str(a);
            r.rhs_coeff = ring_traits<CycNumber>::str(b);
            return r;
          });
  } else if (name == "all") {
    for (const auto& s : suite_names())
      for (auto& ch : suite_checks(s, c)) out.push_back(std::move(ch));
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  return out;
}

inline std::vector<VerificationReport> run_suite(const std::string& name, const SuiteConfig& c = {},
                                                 unsigned workers = worker_count()) {
  return run_checks(suite_checks(name, c), workers);
}

}  // namespace qmaass
