#pragma once

// JSON and CSV forms of series, coefficient tables and waveform values.

#include <complex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qmaass/maass.hpp"
#include "qmaass/qseries.hpp"

namespace qmaass {

/// {"denom": D, "trunc_num": p, "trunc_den": q, "terms": [[m, "p/q"], ...]};
/// trunc_num and trunc_den are null for exact series.
template <class R>
nlohmann::json series_to_json(const QSeries<R>& s) {
  nlohmann::json j;
  j["denom"] = s.denom();
  if (s.trunc()) {
    j["trunc_num"] = numerator(*s.trunc()).str();
    j["trunc_den"] = denominator(*s.trunc()).str();
  } else {
    j["trunc_num"] = nullptr;
    j["trunc_den"] = nullptr;
  }
  nlohmann::json t = nlohmann::json::array();
  for (const auto& [m, c] : s.terms()) t.push_back({m, ring_traits<R>::str(c)});
  j["terms"] = std::move(t);
  return j;
}

namespace detail {

template <class R>
R parse_coeff(const std::string& s);

template <>
inline BigInt parse_coeff<BigInt>(const std::string& s) {
  const Rational r = parse_rational(s);
  if (!is_integer(r)) throw std::invalid_argument("non-integral coefficient " + s + " in an integer series");
  return numerator(r);
}

template <>
inline Rational parse_coeff<Rational>(const std::string& s) {
  return parse_rational(s);
}

inline std::string csv_str(const BigInt& c) { return c.str(); }
inline std::string csv_str(const Rational& c) { return to_string(c); }
inline std::string csv_str(const CycNumber& c) { return ring_traits<CycNumber>::str(c); }

inline Rational parse_json_int(const nlohmann::json& v) {
  return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long long>());
}

}  // namespace detail

/// Inverse of series_to_json for integer and rational coefficients.
template <class R>
QSeries<R> series_from_json(const nlohmann::json& j) {
  const long long D = j.at("denom").get<long long>();
  Trunc t;
  if (!j.at("trunc_num").is_null())
    t = detail::parse_json_int(j.at("trunc_num")) / detail::parse_json_int(j.at("trunc_den"));
  std::vector<typename QSeries<R>::Term> terms;
  for (const auto& e : j.at("terms")) terms.emplace_back(e.at(0).get<long long>(), detail::parse_coeff<R>(e.at(1).get<std::string>()));
  return QSeries<R>::from_terms(D, std::move(terms), t);
}

/// Columns exponent_num, exponent_den, coefficient; exponents in lowest terms.
/// With `dense` every exponent m/D from min(0, first) up to the truncation gets
/// a row, zeros included (truncated series only).
template <class R>
void series_to_csv(std::ostream& os, const QSeries<R>& s, bool dense = false) {
  os << "exponent_num,exponent_den,coefficient\n";
  auto row = [&](long long m, const R& c) {
    const Rational e = make_rational(m, s.denom());
    os << numerator(e) << ',' << denominator(e) << ',' << detail::csv_str(c) << '\n';
  };
  if (!dense || !s.trunc()) {
    for (const auto& [m, c] : s.terms()) row(m, c);
    return;
  }
  const long long end = to_ll(ceil_of(*s.trunc() * Rational(s.denom())));
  long long m = s.terms().empty() ? 0 : std::min(0LL, s.terms().front().first);
  auto it = s.terms().begin();
  for (; m < end; ++m) {
    if (it != s.terms().end() && it->first == m) {
      row(m, it->second);
      ++it;
    } else {
      row(m, ring_traits<R>::from_int(0));
    }
  }
}

/// First line "scale=N", then "n,A_n" and one row per nonzero coefficient.
inline void table_to_csv(std::ostream& os, const MaassCoeffTable& t) {
  os << "scale=" << t.N << '\n' << "n,A_n\n";
  for (const auto& [n, c] : t.coeffs) os << n << ',' << to_string(c) << '\n';
}

inline MaassCoeffTable table_from_csv(std::istream& is) {
  MaassCoeffTable t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("scale=", 0) != 0) throw std::invalid_argument("table CSV must start with scale=N");
  t.N = std::stoll(line.substr(6));
  if (!std::getline(is, line) || line != "n,A_n") throw std::invalid_argument("table CSV must have header n,A_n");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed table row: " + line);
    const long long n = std::stoll(line.substr(0, comma));
    if (n == 0) throw std::invalid_argument("tables carry no n = 0 coefficient");
    t.coeffs[n] = parse_rational(line.substr(comma + 1));
  }
  return t;
}

inline nlohmann::json waveform_json(std::complex<double> tau, std::complex<double> value, double tail_bound) {
  return {{"tau_re", tau.real()}, {"tau_im", tau.imag()}, {"value_re", value.real()}, {"value_im", value.imag()},
          {"tail_bound", tail_bound}};
}

}  // namespace qmaass
