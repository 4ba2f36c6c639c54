#pragma once

// Verification reports: one object per check, serialized as a single JSON line.

#include <optional>
#include <string>

#include <json.hpp>

#include "qmaass/qseries.hpp"

namespace qmaass {

struct VerificationReport {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  bool pass = true;
  std::optional<Rational> first_mismatch_exponent;
  std::optional<std::string> lhs_coeff, rhs_coeff;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["params"] = params;
    j["status"] = pass ? "pass" : "fail";
    if (first_mismatch_exponent) j["first_mismatch_exponent"] = to_string(*first_mismatch_exponent);
    if (lhs_coeff) j["lhs_coeff"] = *lhs_coeff;
    if (rhs_coeff) j["rhs_coeff"] = *rhs_coeff;
    if (!details.empty()) j["details"] = details;
    return j;
  }
};

inline std::string trunc_string(const Trunc& t) { return t ? to_string(*t) : "exact"; }

/// Compares two series coefficientwise below `upto` (or below the smaller of
/// their own truncations when `upto` is absent). Fails if either side is not
/// known far enough.
template <class R>
VerificationReport compare_series(std::string check, nlohmann::json params, const QSeries<R>& lhs,
                                  const QSeries<R>& rhs, Trunc upto) {
  VerificationReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  Trunc known = min_trunc(lhs.trunc(), rhs.trunc());
  Trunc t = upto ? upto : known;
  r.details["compared_below"] = trunc_string(t);
  r.details["lhs_terms"] = lhs.size();
  if (upto && known && *known < *upto) {
    r.pass = false;
    r.details["error"] = "operands known only below " + to_string(*known);
    return r;
  }
  QSeries<R> d = (lhs - rhs).with_trunc(t);
  if (!d.is_zero()) {
    Rational e = *d.order();
    r.pass = false;
    r.first_mismatch_exponent = e;
    r.lhs_coeff = ring_traits<R>::str(lhs.coeff(e));
    r.rhs_coeff = ring_traits<R>::str(rhs.coeff(e));
  }
  return r;
}

}  // namespace qmaass
