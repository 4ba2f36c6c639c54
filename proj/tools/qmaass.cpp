// qmaass: verification suites, series expansion and numeric evaluation.
//
//   qmaass verify <suite> [flags]    JSON lines, one per check
//   qmaass expand <target> [flags]   coefficient tables (csv or json)
//   qmaass eval <target> [flags]     JSON lines
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage error,
// 3 requested precision not reachable with the given cuts.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "qmaass.hpp"

using namespace qmaass;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2, kPrecision = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string target;
  std::string order;
  std::optional<int> j;
  std::optional<long long> k, l, M, kmax, nmax, n;
  std::string a, b, x, xs, gamma, multiplier;
  std::optional<long long> ncut, lattice_cut;
  std::string tau = "0,1";
  std::string out, format = "json";
  std::string region = "cone";
  int hb = 0;
  bool cohen = false, negative = false, conjugate = false;
  double tol = 1e-8;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

Rational rational_arg(const std::string& s, const char* flag) {
  try {
    return parse_rational(s);
  } catch (const std::exception&) {
    throw UsageError(std::string("--") + flag + " expects p/q, got '" + s + "'");
  }
}

Vec2 vec_arg(const std::string& s, const char* flag) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError(std::string("--") + flag + " expects \"p/q,p/q\"");
  return {rational_arg(parts[0], flag), rational_arg(parts[1], flag)};
}

double real_arg(const std::string& s) {
  if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

/// "re,im", or "i" for the imaginary unit.
std::complex<double> tau_arg(const std::string& s) {
  if (s == "i") return {0.0, 1.0};
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("--tau expects re,im");
  try {
    return {real_arg(parts[0]), real_arg(parts[1])};
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("--tau expects re,im, got '" + s + "'");
  }
}

FamilyId family_arg(const Options& o) {
  if (!o.j || !o.k || !o.l) throw UsageError("this target needs --j, --k and --l");
  FamilyId id{*o.j, *o.k, *o.l};
  try {
    id.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return id;
}

std::optional<FamilyId> optional_family(const Options& o) {
  if (!o.j && !o.k && !o.l) return std::nullopt;
  return family_arg(o);
}

Rational order_arg(const Options& o, const Rational& fallback) {
  return o.order.empty() ? fallback : rational_arg(o.order, "order");
}

/// stdout unless --out is given.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--order", o.order, "truncation order p/q");
  app->add_option("--j", o.j, "family index 1..4");
  app->add_option("--k", o.k, "k >= 1");
  app->add_option("--l", o.l, "1 <= l <= k");
  app->add_option("--M", o.M, "theta parameter M >= 2");
  app->add_option("--a", o.a, "theta vector a as \"p/q,p/q\"");
  app->add_option("--b", o.b, "theta vector b as \"p/q,p/q\"");
  app->add_option("--ncut", o.ncut, "Fourier cut |n| <= ncut");
  app->add_option("--lattice-cut", o.lattice_cut, "lattice cut max(|n|,|nu|) <= cut");
  app->add_option("--tau", o.tau, "tau as re,im (or i)");
  app->add_option("--x", o.x, "rational point p/q");
  app->add_option("--out", o.out, "output path (default stdout)");
  app->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--kmax", o.kmax, "largest k in sweeps");
  app->add_option("--nmax", o.nmax, "largest n (or root order) in sweeps");
  app->add_option("--tol", o.tol, "tolerance for numeric checks");
}

template <class R>
void write_series(Sink& sink, const Options& o, const QSeries<R>& s, bool dense, nlohmann::json meta = {}) {
  if (o.format == "csv") {
    series_to_csv(sink.os(), s, dense);
  } else {
    nlohmann::json j = series_to_json(s);
    if (!meta.empty()) j["meta"] = std::move(meta);
    sink.os() << j.dump() << '\n';
  }
}

int cmd_verify(const Options& o) {
  SuiteConfig c;
  if (!o.order.empty()) c.order = rational_arg(o.order, "order");
  c.kmax = o.kmax;
  c.nmax = o.nmax;
  c.family = optional_family(o);
  if (o.ncut) c.n_cut = *o.ncut;
  if (o.lattice_cut) c.lattice_cut = *o.lattice_cut;
  c.tau = tau_arg(o.tau);
  c.tolerance = o.tol;
  std::vector<std::pair<std::string, Check>> checks;
  try {
    checks = suite_checks(o.target, c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Sink sink(o.out);
  const auto reports = run_checks(checks);
  bool fail = false, precision = false;
  for (const auto& r : reports) {
    sink.os() << r.to_json().dump() << '\n';
    if (!r.pass) {
      if (r.details.contains("precision_failure")) precision = true;
      else fail = true;
    }
  }
  return fail ? kFail : precision ? kPrecision : kPass;
}

int cmd_expand(const Options& o) {
  Sink sink(o.out);
  const std::string& t = o.target;
  if (t == "hpoly") {
    if (!o.k) throw UsageError("expand hpoly needs --k");
    const long long k = *o.k, l = o.l.value_or(1), nmax = o.nmax.value_or(8);
    if (o.format == "csv") sink.os() << "n,exponent_num,exponent_den,coefficient\n";
    for (long long n = o.hb; n <= nmax; ++n) {
      const ZSeries h = hpoly({k, l, o.hb, n});
      if (o.format == "csv") {
        for (const auto& [m, c] : h.terms()) sink.os() << n << ',' << m << ",1," << c << '\n';
      } else {
        nlohmann::json j = series_to_json(h);
        j["meta"] = {{"k", k}, {"l", l}, {"b", o.hb}, {"n", n}};
        sink.os() << j.dump() << '\n';
      }
    }
  } else if (t == "f") {
    const FamilyId id = family_arg(o);
    write_series(sink, o, f_series(id, order_arg(o, Rational(50))), true, id.to_json());
  } else if (t == "sigma") {
    write_series(sink, o, sigma_series(SigmaRep::pochhammer, order_arg(o, Rational(200))), true);
  } else if (t == "sigma-star") {
    write_series(sink, o, sigma_star_series(SigmaStarRep::alternating, order_arg(o, Rational(200))), true);
  } else if (t == "s-theta") {
    ThetaParams p;
    Rational order = order_arg(o, Rational(50));
    if (o.j) {
      const FamilyParams fp = param_table(family_arg(o));
      p = fp.theta;
      // the window starts at q^alpha so that it lines up with expand f
      order = fp.alpha + order;
    } else {
      if (!o.M || o.a.empty() || o.b.empty()) throw UsageError("expand s-theta needs --j/--k/--l or --M, --a, --b");
      p = {*o.M, vec_arg(o.a, "a"), vec_arg(o.b, "b")};
    }
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (phases_collapse(p))
      write_series(sink, o, s_series_integer(p, order), false, p.to_json());
    else
      write_series(sink, o, s_series(p, order), false, p.to_json());
  } else if (t == "negative-part") {
    if (!o.M || !o.l) throw UsageError("expand negative-part needs --M and --l");
    NegativePartOptions opt;
    if (o.region == "printed") opt.region = NegativeRegion::printed;
    else if (o.region != "cone") throw UsageError("--region must be printed or cone");
    const auto r = negative_part_series(*o.M, *o.l, order_arg(o, Rational(20)), opt);
    nlohmann::json meta = r.diagnostics_json();
    meta["region"] = o.region;
    meta["experimental"] = true;
    write_series(sink, o, r.series, false, meta);
    std::cerr << meta.dump() << '\n';
  } else if (t == "table") {
    MaassCoeffTable tab;
    if (o.cohen) {
      tab = cohen_table(o.nmax.value_or(o.ncut.value_or(5000)));
    } else {
      tab = family_table(family_arg(o), order_arg(o, Rational(50)), o.negative);
    }
    if (o.format == "csv") {
      table_to_csv(sink.os(), tab);
    } else {
      nlohmann::json c = nlohmann::json::array();
      for (const auto& [n, v] : tab.coeffs) c.push_back({n, to_fraction_string(v)});
      sink.os() << nlohmann::json{{"scale", tab.N}, {"label", tab.label}, {"experimental", tab.experimental},
                                  {"complete_to", tab.extent()}, {"coeffs", c}}
                       .dump()
                << '\n';
    }
  } else {
    throw UsageError("unknown expand target '" + t + "'");
  }
  return kPass;
}

MaassCoeffTable table_arg(const Options& o, long long n_cut) {
  if (o.cohen) return cohen_table(n_cut);
  const FamilyId id = family_arg(o);
  const FamilyParams fp = param_table(id);
  // enough terms of the lattice sum to reach |n| <= n_cut in units of 1/N
  MaassCoeffTable probe = family_table(id, Rational(1), o.negative);
  const Rational order = make_rational(n_cut, probe.N) + Rational(1);
  return family_table(id, order, o.negative);
}

int cmd_eval(const Options& o) {
  Sink sink(o.out);
  const std::string& t = o.target;
  if (t == "waveform") {
    const long long n_cut = o.ncut.value_or(5000);
    const MaassCoeffTable tab = table_arg(o, n_cut);
    const auto tau = tau_arg(o.tau);
    const auto w = eval_waveform(tab, tau, n_cut);
    nlohmann::json j = waveform_json(tau, w.value, w.tail_bound);
    if (tab.experimental) j["experimental"] = true;
    sink.os() << j.dump() << '\n';
    return w.tail_bound <= o.tol ? kPass : kPrecision;
  }
  if (t == "quantum") {
    if (o.x.empty()) throw UsageError("eval quantum needs --x");
    sink.os() << quantum_value(family_arg(o), rational_arg(o.x, "x")).to_json().dump() << '\n';
    return kPass;
  }
  if (t == "radial") {
    if (o.x.empty()) throw UsageError("eval radial needs --x");
    const auto r = radial_limit_check(family_arg(o), rational_arg(o.x, "x"));
    sink.os() << r.as_verification().to_json().dump() << '\n';
    return r.pass ? kPass : kFail;
  }
  if (t == "cocycle") {
    const auto g = split(o.gamma, ',');
    if (g.size() != 4) throw UsageError("--gamma expects \"a,b,c,d\"");
    Mat2 m{};
    for (int i = 0; i < 4; ++i) m[i / 2][i % 2] = std::stoll(g[static_cast<std::size_t>(i)]);
    std::vector<Rational> xs;
    for (const auto& s : split(o.xs, ',')) xs.push_back(rational_arg(s, "xs"));
    if (xs.empty()) throw UsageError("eval cocycle needs --xs");
    MaassCoeffTable tab;
    if (o.cohen) {
      tab.source = MaassCoeffTable::Source::cohen;
    } else {
      tab.source = MaassCoeffTable::Source::family;
      tab.family = family_arg(o);
    }
    std::optional<CocycleTwist> twist;
    if (!o.multiplier.empty())
      twist = CocycleTwist{std::polar(1.0, 2 * std::numbers::pi * to_double(rational_arg(o.multiplier, "multiplier"))),
                           o.conjugate};
    CocycleResult res;
    try {
      res = cocycle_samples(tab, m, xs, twist);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (const auto& s : res.samples)
      sink.os() << nlohmann::json{{"x", to_fraction_string(s.x)}, {"gamma_x", to_fraction_string(s.gx)},
                                  {"value_re", s.value.real()},      {"value_im", s.value.imag()},
                                  {"fplus_x_re", s.fplus_x.real()},  {"fplus_x_im", s.fplus_x.imag()}}
                       .dump()
                << '\n';
    sink.os() << nlohmann::json{{"max_second_difference", res.max_second_difference}}.dump() << '\n';
    return kPass;
  }
  throw UsageError("unknown eval target '" + t + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-series, indefinite theta functions and Maass waveforms"};
  app.require_subcommand(1);
  Options o;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", o.target, "ag|sigma|bailey|prop32|params|thm1|completion|cohen|duality|all")->required();
  add_common(verify, o);
  auto* expand = app.add_subcommand("expand", "write a coefficient table");
  expand->add_option("target", o.target, "hpoly|f|sigma|sigma-star|s-theta|negative-part|table")->required();
  add_common(expand, o);
  expand->add_option("--hb", o.hb, "b index of H_n (0 or 1)")->check(CLI::Range(0, 1));
  expand->add_option("--region", o.region, "negative-part region: cone or printed");
  expand->add_flag("--cohen", o.cohen, "Cohen's table");
  expand->add_flag("--negative", o.negative, "include the experimental negative coefficients");
  auto* eval = app.add_subcommand("eval", "numeric evaluation");
  eval->add_option("target", o.target, "waveform|quantum|radial|cocycle")->required();
  add_common(eval, o);
  eval->add_flag("--cohen", o.cohen, "use Cohen's example");
  eval->add_flag("--negative", o.negative, "include the experimental negative coefficients");
  eval->add_option("--gamma", o.gamma, "matrix \"a,b,c,d\"");
  eval->add_option("--xs", o.xs, "comma separated rationals");
  eval->add_option("--multiplier", o.multiplier, "cocycle twist chi = e(w) for w = p/q");
  eval->add_flag("--conjugate", o.conjugate, "conjugate F+(gamma x) in the cocycle");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  try {
    if (verify->parsed()) return cmd_verify(o);
    if (expand->parsed()) return cmd_expand(o);
    return cmd_eval(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InsufficientTableError& e) {
    std::cerr << "precision: " << e.what() << '\n';
    return kPrecision;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
}
