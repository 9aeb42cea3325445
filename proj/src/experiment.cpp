#include "skewcount/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "skewcount/numtheory.hpp"

namespace skewcount {
namespace {

using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& message) { fail(ErrorKind::Config, "config: " + message); }

json& at_path(json& root, const std::string& path) {
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) config_error("empty key in '" + path + "'");
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) config_error("'" + path + "' descends into a non-object");
    node = &(*node)[key];
    if (dot == std::string::npos) return *node;
    start = dot + 1;
  }
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("key '") + key + "' has the wrong type");
  }
}

Complex parse_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  config_error("coefficient must be a number or [re, im], got " + v.dump());
}

std::vector<Complex> parse_coeffs(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) config_error(std::string(what) + " must be a non-empty coefficient list");
  std::vector<Complex> out;
  for (const auto& c : v) out.push_back(parse_complex(c));
  return out;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::string header_line(const ExperimentConfig& c) {
  return "# skewcount " + tool_version() + " config fnv1a:" + c.digest + "\n";
}

json envelope(const ExperimentConfig& c, const std::string& kind) {
  return json{{"schema", 1}, {"tool", "skewcount"}, {"version", tool_version()}, {"config_digest", c.digest},
              {"kind", kind}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string z_text(std::complex<double> z) {
  if (z.imag() == 0.0) return shortest(z.real());
  return shortest(z.real()) + (z.imag() < 0 ? "" : "+") + shortest(z.imag()) + "i";
}

std::string point_text(const SpherePoint& p) { return p.is_infinity() ? "inf" : z_text(p.value()); }

std::vector<int> degrees_of(const ExperimentConfig& c) {
  std::vector<int> d;
  for (const auto& m : c.maps) d.push_back(m.degree());
  return d;
}

// ---- tables -------------------------------------------------------------

json table_json(const CountTable& t) {
  json rows = json::array();
  for (int n = 1; n <= t.n_max(); ++n) rows.push_back({{"n", n}, {"E", t.E_text(n)}, {"D", t.D_text(n)}, {"C", t.C_text(n)}});
  return json{{"mode", to_string(t.mode())}, {"source", t.source},      {"potential", t.potential},
              {"fiber", t.fiber_filter},     {"degrees", t.degrees},     {"undefined_points", t.undefined_points},
              {"rows", rows}};
}

std::string table_csv(const ExperimentConfig& c, const CountTable& t) {
  std::string out = header_line(c) + "n,E,D,C,mode\n";
  const std::string mode = to_string(t.mode());
  for (int n = 1; n <= t.n_max(); ++n)
    out += std::to_string(n) + "," + t.E_text(n) + "," + t.D_text(n) + "," + t.C_text(n) + "," + mode + "\n";
  return out;
}

// ---- reports ------------------------------------------------------------

json report_json(const ComparabilityReport& r) {
  json points = json::array();
  for (const auto& p : r.points) points.push_back({{"x", p.x}, {"A", p.A}, {"B", p.B}, {"ratio", p.ratio}});
  json context = json::array();
  for (const auto& [k, v] : r.context) context.push_back({{"name", k}, {"value", v}});
  return json{{"claim", r.claim},   {"statement", r.statement}, {"x_label", r.x_label},   {"burn_in", r.burn_in},
              {"kappa1", r.kappa1}, {"kappa2", r.kappa2},       {"band_ratio", r.band_ratio}, {"ceiling", r.ceiling},
              {"pass", r.pass},     {"failure", r.failure},     {"context", context},     {"notes", r.notes},
              {"points", points}};
}

std::string report_plot(const ExperimentConfig& c, const ComparabilityReport& r) {
  std::string out = header_line(c) + "# " + r.claim + ": " + r.statement + "\n# " + r.x_label + " A B ratio\n";
  for (const auto& p : r.points)
    out += shortest(p.x) + " " + shortest(p.A) + " " + shortest(p.B) + " " + shortest(p.ratio) + "\n";
  return out;
}

std::string report_table(const std::vector<ComparabilityReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "claim" << std::setw(16) << "window" << std::setw(14) << "kappa1" << std::setw(14)
      << "kappa2" << std::setw(14) << "band" << std::setw(9) << "ceiling"
      << "verdict\n";
  for (const auto& r : reports) {
    std::string window = "-";
    if (!r.points.empty()) window = r.x_label + " " + shortest(r.points.front().x) + ".." + shortest(r.points.back().x);
    out << std::setw(8) << r.claim << std::setw(16) << window << std::setw(14) << std::setprecision(8) << r.kappa1
        << std::setw(14) << r.kappa2 << std::setw(14) << r.band_ratio << std::setw(9) << r.ceiling
        << (r.pass ? "PASS" : "FAIL");
    if (!r.failure.empty()) out << "  (" << r.failure << ")";
    out << "\n";
  }
  return out.str();
}

// ---- subcommands ------------------------------------------------------------

struct LambdaChoice {
  double value = 0.0;
  std::string source;
  std::optional<LogLinearFit> fit;
};

LambdaChoice choose_lambda(const ExperimentConfig& c, const CountTable& t) {
  if (c.lambda) return {*c.lambda, "config", std::nullopt};
  const auto est = lambda_estimate(t, c.lambda_fit.first, c.lambda_fit.second);
  return {est.lambda, "estimate", est.fit};
}

json lambda_json(const LambdaChoice& l) {
  json j{{"value", l.value}, {"source", l.source}};
  if (l.fit) {
    j["fit"] = {{"slope", l.fit->slope},
                {"intercept", l.fit->intercept},
                {"residual", l.fit->residual},
                {"n_lo", l.fit->n_lo},
                {"n_hi", l.fit->n_hi}};
  }
  return j;
}

void add(RunResult& r, std::string name, std::string content) { r.files.push_back({std::move(name), std::move(content)}); }

RunResult run_count(const ExperimentConfig& c) {
  const auto t = build_table(c, c.n_max);
  RunResult r;
  if (c.wants("csv")) add(r, "table.csv", table_csv(c, t));
  if (c.wants("json")) {
    auto j = envelope(c, "count");
    j["table"] = table_json(t);
    add(r, "table.json", dump(j));
  }
  std::ostringstream s;
  s << "table: " << t.source << ", mode " << to_string(t.mode()) << ", n = 1.." << t.n_max() << "\n";
  for (int n = 1; n <= std::min(t.n_max(), 10); ++n)
    s << "n=" << n << " E=" << t.E_text(n) << " D=" << t.D_text(n) << " C=" << t.C_text(n) << "\n";
  r.summary = s.str();
  return r;
}

RunResult run_orbits(const ExperimentConfig& c) {
  const SkewSystem sys(c.maps, c.skew);
  const int n = c.orbits_n;
  std::vector<SkewPeriodicPoint> prime;
  for (auto& p : periodic_points(sys, n, &c.potential))
    if (p.prime_period == n) prime.push_back(std::move(p));
  int undefined = 0;
  if (c.fiber == FiberFilter::Julia) {
    auto filtered = apply_fiber_filter(sys, std::move(prime), FiberFilter::Julia);
    prime = std::move(filtered.points);
    undefined = filtered.undefined;
  }
  const auto orbits = group_into_orbits(sys, prime, n);
  RunResult r;
  std::string csv = header_line(c) + "length,word,z,multiplicity,weight_exponent,members\n";
  json list = json::array();
  for (const auto& o : orbits) {
    std::string members;
    json mj = json::array();
    for (const auto& m : o.members) {
      if (!members.empty()) members += " ";
      members += word_to_string(m.word) + "@" + point_text(m.z);
      mj.push_back({{"word", word_to_string(m.word)}, {"z", point_text(m.z)}});
    }
    csv += std::to_string(o.length) + "," + word_to_string(o.representative.word) + "," +
           point_text(o.representative.z) + "," + std::to_string(o.multiplicity) + "," + shortest(o.weight_exponent) +
           "," + members + "\n";
    list.push_back({{"length", o.length},
                    {"word", word_to_string(o.representative.word)},
                    {"z", point_text(o.representative.z)},
                    {"multiplicity", o.multiplicity},
                    {"weight_exponent", o.weight_exponent},
                    {"members", mj}});
  }
  if (c.wants("csv")) add(r, "orbits.csv", csv);
  if (c.wants("json")) {
    auto j = envelope(c, "orbits");
    j["n"] = n;
    j["potential"] = c.potential.name();
    j["undefined_points"] = undefined;
    j["orbits"] = list;
    add(r, "orbits.json", dump(j));
  }
  std::ostringstream s;
  s << orbits.size() << " closed orbits of length " << n << "\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(orbits.size(), 20); ++i)
    s << word_to_string(orbits[i].representative.word) << " " << point_text(orbits[i].representative.z) << " x"
      << orbits[i].multiplicity << "\n";
  r.summary = s.str();
  return r;
}

int table_extent(const ExperimentConfig& c) {
  int n = std::max({c.n_max, c.N_max, c.dirichlet_N, c.lambda_fit.second});
  for (const auto& [claim, w] : c.windows)
    if (claim != "cor2") n = std::max(n, w.second);
  return n;
}

RunResult run_verify(const ExperimentConfig& c) {
  const auto t = build_table(c, table_extent(c));
  const auto lambda = choose_lambda(c, t);
  const BandOptions base{c.burn_in, c.band_ceiling};
  std::pair<int, bool> convolution{0, false};
  auto band = [&](const std::string& claim, int hi) {
    const auto w = c.window(claim, static_cast<int>(std::ceil(c.burn_in)), hi);
    return std::pair<BandOptions, int>{{double(w.first), c.band_ceiling}, w.second};
  };

  std::vector<ComparabilityReport> reports;
  // Numerical trouble in one claim fails that claim; configuration errors abort.
  auto attempt = [&](const std::string& claim, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      if (exit_code_for(e.kind()) != 3) throw;
      ComparabilityReport failed;
      failed.claim = claim;
      failed.statement = "not evaluated";
      failed.kappa1 = failed.kappa2 = failed.band_ratio = std::numeric_limits<double>::quiet_NaN();
      failed.failure = std::string(to_string(e.kind())) + ": " + e.what();
      reports.push_back(std::move(failed));
    }
  };
  auto theorems = [&](const CountTable& table, double lam, const std::string& prefix, std::pair<BandOptions, int> w12,
                      std::pair<BandOptions, int> w4) {
    auto name = [&](int i, const char* plain) { return prefix.empty() ? std::string(plain) : prefix + "." + std::to_string(i); };
    auto relabel = [&](ComparabilityReport rep, const std::string& claim) {
      rep.claim = claim;
      reports.push_back(std::move(rep));
    };
    attempt(name(1, "thm1"), [&] { relabel(verify_theorem_1(table, lam, w12.second, w12.first), name(1, "thm1")); });
    attempt(name(2, "thm2"), [&] {
      const auto w = prefix.empty() ? band("thm2", c.N_max) : w12;
      relabel(verify_theorem_2(table, lam, w.second, w.first), name(2, "thm2"));
    });
    attempt(name(3, "thm3"),
            [&] { relabel(verify_theorem_3(table, lam, c.k_grid, base, c.meissel_tail), name(3, "thm3")); });
    attempt(name(4, "thm4"), [&] {
      const auto z_grid = prefix.empty() ? c.z_grid : std::vector<std::complex<double>>{c.z_grid.empty() ? 2.0 : c.z_grid.front()};
      const auto t4 = verify_theorem_4(table, lam, z_grid, w4.second, w4.first);
      if (prefix.empty()) convolution = {t4.convolution_checked_to, t4.convolution_holds};
      for (auto rep : t4.per_z) {
        if (!t4.convolution_holds) {
          rep.second.pass = false;
          rep.second.failure = "convolution identity fails";
        }
        relabel(std::move(rep.second), name(4, "thm4"));
      }
    });
  };

  theorems(t, lambda.value, "", band("thm1", c.N_max), band("thm4", c.dirichlet_N));
  if (!c.rho_z.empty()) {
    attempt("rho", [&] {
      const double lambda_hat = 1.0 / radius_estimate(t, c.lambda_fit.first, c.lambda_fit.second);
      reports.push_back(verify_rho(t, lambda.value, lambda_hat, c.rho_z, base));
    });
  }

  const auto degrees = degrees_of(c);
  if (c.potential.kind() == Potential::Kind::Zero && c.fiber == FiberFilter::All) {
    double sum = 0.0;
    for (int d : degrees) sum += d;
    const auto w = band("cor1", c.N_max);
    theorems(t, sum, "cor1", w, w);
  }
  const bool constant_like =
      c.potential.kind() == Potential::Kind::Zero || c.potential.kind() == Potential::Kind::Constant;
  if (c.maps.size() == 1 && degrees[0] >= 2 && constant_like) {
    std::optional<CountTable> own;
    if (!(t.fiber_filter == "julia" && t.n_max() >= c.corollary_n)) {
      const SkewSystem sys(c.maps, c.skew);
      own = build_enumerated_table(sys, c.potential, c.corollary_n, FiberFilter::Julia);
    }
    const CountTable& julia = own ? *own : t;
    const double lambda2 = degrees[0] * std::exp(c.potential.kind() == Potential::Kind::Constant ? c.potential.c() : 0.0);
    const auto w = c.window("cor2", static_cast<int>(std::ceil(c.burn_in)), c.corollary_n);
    const std::pair<BandOptions, int> wb{{double(w.first), c.band_ceiling}, w.second};
    theorems(julia, lambda2, "cor2", wb, wb);
  }

  bool pass = convolution.second;
  for (const auto& r : reports) pass = pass && r.pass;

  RunResult r;
  r.exit_code = pass ? 0 : 1;
  if (c.wants("csv")) add(r, "table.csv", table_csv(c, t));
  if (c.wants("json")) {
    auto j = envelope(c, "verify");
    j["table"] = table_json(t);
    j["lambda"] = lambda_json(lambda);
    j["convolution"] = {{"checked_to", convolution.first}, {"holds", convolution.second}};
    json list = json::array();
    for (const auto& rep : reports) list.push_back(report_json(rep));
    j["reports"] = list;
    j["warnings"] = c.warnings;
    j["pass"] = pass;
    add(r, "verify.json", dump(j));
  }
  std::ostringstream s;
  s << "table: " << t.source << ", mode " << to_string(t.mode()) << ", n = 1.." << t.n_max()
    << "\nlambda = " << shortest(lambda.value) << " (" << lambda.source << ")\n"
    << "convolution E(n) = sum d C(d) up to " << convolution.first << ": "
    << (convolution.second ? "holds" : "FAILS") << "\n"
    << report_table(reports) << (pass ? "all claims pass\n" : "some claims fail\n");
  r.summary = s.str();
  add(r, "verify.txt", header_line(c) + r.summary);
  if (c.wants("plotdata")) {
    int thm4_index = 0;
    for (const auto& rep : reports) {
      std::string name = "plot_" + rep.claim;
      if (rep.claim == "thm4") name += "_z" + std::to_string(thm4_index++);
      add(r, name + ".dat", report_plot(c, rep));
    }
  }
  return r;
}

RunResult run_series(const ExperimentConfig& c) {
  const auto t = build_table(c, table_extent(c));
  const auto lambda = choose_lambda(c, t);
  const int N = std::min(c.N_max, t.n_max());
  struct Row {
    std::string kind;
    int N;
    double k;
    std::complex<double> z;
    std::complex<double> value;
    int terms;
    double tail_bound;
    std::string method;
    std::string exact;
  };
  std::vector<Row> rows;
  rows.push_back({"prime_orbit", N, 0.0, {}, pi_S(t, N), N, 0.0, "finite sum",
                  t.mode() == CountMode::Exact ? pi_S_exact(t, N).str() : std::string()});
  rows.push_back({"mertens", N, 0.0, {}, mertens_sum(t, lambda.value, N), N, 0.0, "finite sum", {}});
  for (double k : c.k_grid) {
    const auto v = meissel_sum(t, lambda.value, k, c.meissel_tail);
    rows.push_back({"meissel", v.N, k, {}, v.value, v.truncation->terms, v.truncation->tail_bound, v.truncation->method, {}});
  }
  for (const auto& z : c.z_grid) {
    const auto d = dirichlet_partial(t, lambda.value, z, c.dirichlet_N);
    rows.push_back({"dirichlet_ratio", d.N, 0.0, z, d.ratio(), d.N, 0.0, d.reading, {}});
  }
  if (!c.rho_z.empty()) {
    const double lambda_hat = 1.0 / radius_estimate(t, c.lambda_fit.first, c.lambda_fit.second);
    for (double z : c.rho_z) {
      const auto v = rho_series(t, z, lambda_hat);
      rows.push_back({"rho", v.N, 0.0, z, v.value, v.truncation->terms, v.truncation->tail_bound, v.truncation->method, {}});
    }
  }
  RunResult r;
  std::string csv = header_line(c) + "kind,N,k,z_re,z_im,value_re,value_im,terms,tail_bound,exact\n";
  json list = json::array();
  for (const auto& row : rows) {
    csv += row.kind + "," + std::to_string(row.N) + "," + shortest(row.k) + "," + shortest(row.z.real()) + "," +
           shortest(row.z.imag()) + "," + shortest(row.value.real()) + "," + shortest(row.value.imag()) + "," +
           std::to_string(row.terms) + "," + shortest(row.tail_bound) + "," + row.exact + "\n";
    list.push_back({{"kind", row.kind},
                    {"N", row.N},
                    {"k", row.k},
                    {"z", complex_json(row.z)},
                    {"value", complex_json(row.value)},
                    {"terms", row.terms},
                    {"tail_bound", row.tail_bound},
                    {"method", row.method},
                    {"exact", row.exact}});
  }
  if (c.wants("csv")) add(r, "series.csv", csv);
  if (c.wants("json")) {
    auto j = envelope(c, "series");
    j["lambda"] = lambda_json(lambda);
    j["series"] = list;
    add(r, "series.json", dump(j));
  }
  std::ostringstream s;
  s << "lambda = " << shortest(lambda.value) << " (" << lambda.source << ")\n";
  for (const auto& row : rows) {
    s << row.kind << " N=" << row.N;
    if (row.kind == "meissel") s << " k=" << shortest(row.k);
    if (row.kind == "dirichlet_ratio" || row.kind == "rho") s << " z=" << z_text(row.z);
    s << " value=" << z_text(row.value);
    if (!row.exact.empty() && !std::isfinite(row.value.real())) s << " (exact value has " << row.exact.size() << " digits)";
    s << "\n";
  }
  r.summary = s.str();
  return r;
}

RunResult run_repelling(const ExperimentConfig& c) {
  if (c.maps.size() != 1) config_error("repelling needs exactly one map");
  if (c.maps[0].degree() < 2) config_error("repelling needs a map of degree >= 2");
  const SkewSystem sys(c.maps, c.skew);
  const auto rows = verify_repelling_bounds(sys, c.n_max);
  bool all = true;
  RunResult r;
  std::string csv = header_line(c) + "n,points,repelling,nonrepelling,undefined,lower,upper,holds\n";
  json list = json::array();
  std::ostringstream s;

  for (const auto& row : rows) {
    all = all && row.holds;
    csv += std::to_string(row.n) + "," + std::to_string(row.points) + "," + std::to_string(row.repelling) + "," +
           std::to_string(row.nonrepelling) + "," + std::to_string(row.undefined) + "," + shortest(row.lower) + "," +
           shortest(row.upper) + "," + (row.holds ? "true" : "false") + "\n";
    list.push_back({{"n", row.n},
                    {"points", row.points},
                    {"repelling", row.repelling},
                    {"nonrepelling", row.nonrepelling},
                    {"undefined", row.undefined},
                    {"lower", row.lower},
                    {"upper", row.upper},
                    {"holds", row.holds},
                    {"notes", row.notes}});
    s << "n=" << row.n << " repelling=" << row.repelling << " bounds [" << shortest(row.lower) << ", "
      << shortest(row.upper) << "] " << (row.holds ? "ok" : "VIOLATED") << "\n";
  }
  if (c.wants("csv")) add(r, "repelling.csv", csv);
  if (c.wants("json")) {
    auto j = envelope(c, "repelling");
    j["rows"] = list;
    j["pass"] = all;
    add(r, "repelling.json", dump(j));
  }
  r.exit_code = all ? 0 : 1;
  r.summary = s.str();
  return r;
}

RunResult run_selftest(const ExperimentConfig& c) {
  std::ostringstream s;

  bool ok = true;
  json checks = json::array();
  auto record = [&](const std::string& name, bool good, const std::string& detail) {
    ok = ok && good;
    s << (good ? "ok   " : "FAIL ") << name << ": " << detail << "\n";
    checks.push_back({{"check", name}, {"ok", good}, {"detail", detail}});
  };

  const auto degrees = degrees_of(c);
  const SkewSystem sys(c.maps, c.skew);
  const auto enumerated = build_enumerated_table(sys, Potential::zero(), c.selftest_n);
  for (int n = 1; n <= c.selftest_n; ++n) {
    const BigInt exact = E_exact_zero(n, degrees);
    const BigInt counted(static_cast<long long>(std::llround(enumerated.E(n))));
    record("E(" + std::to_string(n) + ")", exact == counted,
           "formula " + exact.str() + ", enumeration " + counted.str());
    const double cm = C_mobius_floating(enumerated, n);
    record("C(" + std::to_string(n) + ")", std::abs(cm - enumerated.C(n)) <= 1e-9 * std::max(1.0, cm),
           "direct " + shortest(enumerated.C(n)) + ", moebius " + shortest(cm));
  }
  for (std::int64_t N : {100, 1000, 10000}) {
    const double gap = std::abs(harmonic_sum(N) - std::log(double(N)) - double(kEulerGamma));
    record("harmonic(" + std::to_string(N) + ")", gap <= 1.0 / N, "|H - log N - gamma| = " + shortest(gap));
  }
  const double z2 = zeta({2.0, 0.0}, 1e-12).value.real();
  record("zeta(2)", std::abs(z2 - 1.6449340668482264) <= 1e-8, shortest(z2));
  {
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<int> val(-1000, 1000);
    bool round_trip = true;
    for (int trial = 0; trial < 20 && round_trip; ++trial) {
      std::vector<BigInt> a(101);
      std::map<int, BigInt> E;
      for (int n = 1; n <= 100; ++n) a[n] = val(rng);
      for (int n = 1; n <= 100; ++n) {
        BigInt sum = 0;
        for (auto d : divisors(n)) sum += d * a[static_cast<std::size_t>(d)];
        E[n] = sum;
      }
      for (int n = 1; n <= 100; ++n) round_trip = round_trip && C_mobius(E, n) == a[static_cast<std::size_t>(n)];
    }
    record("moebius round trip", round_trip, "20 random sequences of length 100");
  }
  RunResult r;
  r.exit_code = ok ? 0 : 1;
  r.summary = s.str();
  add(r, "selftest.txt", header_line(c) + r.summary);
  if (c.wants("json")) {
    auto j = envelope(c, "selftest");
    j["checks"] = checks;
    j["pass"] = ok;
    add(r, "selftest.json", dump(j));
  }
  return r;
}

}  // namespace

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string tool_version() { return SKEWCOUNT_VERSION; }

std::pair<int, int> ExperimentConfig::window(const std::string& claim, int default_lo, int default_hi) const {
  for (const auto& [name, w] : windows)
    if (name == claim) return {w.first, w.second > 0 ? w.second : default_hi};
  return {default_lo, default_hi};
}

bool ExperimentConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("top level must be an object");
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) config_error("override '" + o + "' is not key=value");
    const std::string value = o.substr(eq + 1);
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) v = value;
    at_path(j, o.substr(0, eq)) = v;
  }

  ExperimentConfig c;
  json canon;

  if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty()) config_error("'maps' must be a non-empty list");
  json maps_canon = json::array();
  for (const auto& m : j["maps"]) {
    if (!m.is_object() || !m.contains("num")) config_error("each map needs 'num' (and optionally 'den')");
    const auto num = parse_coeffs(m["num"], "num");
    const auto den = m.contains("den") ? parse_coeffs(m["den"], "den") : std::vector<Complex>{1.0};
    try {
      c.maps.emplace_back(ComplexPoly(num), ComplexPoly(den), c.skew.map_tol);
    } catch (const Error& e) {
      config_error(std::string("map ") + std::to_string(c.maps.size() + 1) + ": " + e.what());
    }
    json nj = json::array(), dj = json::array();
    for (auto z : num) nj.push_back(complex_json(z));
    for (auto z : den) dj.push_back(complex_json(z));
    maps_canon.push_back({{"num", nj}, {"den", dj}});
  }
  canon["maps"] = maps_canon;
  const int M = static_cast<int>(c.maps.size());
  if (std::none_of(c.maps.begin(), c.maps.end(), [](const RationalMap& r) { return r.degree() >= 2; }))
    c.warnings.push_back("no map has degree >= 2; the growth hypothesis is unlikely to hold");

  const json pot = j.value("potential", json{{"name", "zero"}});
  if (!pot.is_object()) config_error("'potential' must be an object");
  const std::string pname = get<std::string>(pot, "name", "zero");
  if (pname == "zero") {
    c.potential = Potential::zero();
    canon["potential"] = {{"name", "zero"}};
  } else if (pname == "constant") {
    const double cc = get<double>(pot, "c", 0.0);
    c.potential = Potential::constant(cc);
    canon["potential"] = {{"name", "constant"}, {"c", cc}};
  } else if (pname == "symbol_weight") {
    const auto beta = get<std::vector<double>>(pot, "beta", {});
    if (static_cast<int>(beta.size()) != M) config_error("symbol_weight needs one beta per map");
    c.potential = Potential::symbol_weight(beta);
    canon["potential"] = {{"name", "symbol_weight"}, {"beta", beta}};
  } else if (pname == "log_modulus_derivative") {
    c.potential = Potential::log_modulus_derivative();
    canon["potential"] = {{"name", "log_modulus_derivative"}};
  } else {
    config_error("unknown potential '" + pname + "'");
  }

  c.n_max = get<int>(j, "n_max", c.n_max);
  c.N_max = get<int>(j, "N_max", c.n_max);
  if (c.n_max < 1 || c.N_max < 1) config_error("n_max and N_max must be >= 1");
  canon["n_max"] = c.n_max;
  canon["N_max"] = c.N_max;
  if (j.contains("lambda") && !j["lambda"].is_null()) {
    c.lambda = get<double>(j, "lambda", 0.0);
    canon["lambda"] = *c.lambda;
  } else {
    canon["lambda"] = nullptr;
  }

  const std::string mode = get<std::string>(j, "mode", "auto");
  if (mode == "exact") c.mode = TableMode::Exact;
  else if (mode == "numeric") c.mode = TableMode::Numeric;
  else if (mode == "auto") c.mode = TableMode::Auto;
  else config_error("mode must be exact, numeric or auto");
  if (c.mode == TableMode::Exact && c.potential.kind() != Potential::Kind::Zero)
    config_error("mode exact requires the zero potential");
  canon["mode"] = mode;

  const std::string fiber = get<std::string>(j, "fiber", "all");
  if (fiber == "all") c.fiber = FiberFilter::All;
  else if (fiber == "julia") c.fiber = FiberFilter::Julia;
  else config_error("fiber must be all or julia");
  if (c.mode == TableMode::Exact && c.fiber == FiberFilter::Julia) config_error("mode exact counts the full sphere");
  canon["fiber"] = fiber;

  const json tol = j.value("tolerances", json::object());
  c.skew.roots.cluster_tol = get<double>(tol, "root_cluster", c.skew.roots.cluster_tol);
  c.skew.period_closure = get<double>(tol, "period_closure", c.skew.period_closure);
  c.skew.roots.residual_ceiling = get<double>(tol, "residual_ceiling", c.skew.roots.residual_ceiling);
  if (!(c.skew.roots.cluster_tol > 0 && c.skew.period_closure > 0 && c.skew.roots.residual_ceiling > 0))
    config_error("tolerances must be positive");
  canon["tolerances"] = {{"root_cluster", c.skew.roots.cluster_tol},
                         {"period_closure", c.skew.period_closure},
                         {"residual_ceiling", c.skew.roots.residual_ceiling}};

  const json caps = j.value("caps", json::object());
  c.skew.max_degree = get<int>(caps, "max_degree", c.skew.max_degree);
  c.skew.max_words = get<std::int64_t>(caps, "max_words", c.skew.max_words);
  c.zeta_terms = get<std::int64_t>(caps, "zeta_terms", c.zeta_terms);
  if (c.skew.max_degree < 1 || c.skew.max_words < 1 || c.zeta_terms < 1) config_error("caps must be positive");
  canon["caps"] = {{"max_degree", c.skew.max_degree}, {"max_words", c.skew.max_words}, {"zeta_terms", c.zeta_terms}};

  const std::string precision = get<std::string>(j, "precision", "standard");
  if (precision == "standard") c.skew.precision = Precision::Standard;
  else if (precision == "extended") c.skew.precision = Precision::Extended;
  else config_error("precision must be standard or extended");
  canon["precision"] = precision;

  c.burn_in = get<double>(j, "burn_in", c.burn_in);
  c.band_ceiling = get<double>(j, "band_ceiling", c.band_ceiling);
  if (c.burn_in < 0 || !(c.band_ceiling >= 1.0)) config_error("burn_in must be >= 0 and band_ceiling >= 1");
  canon["burn_in"] = c.burn_in;
  canon["band_ceiling"] = c.band_ceiling;

  const json windows = j.value("windows", json::object());
  if (!windows.is_object()) config_error("'windows' must be an object");
  canon["windows"] = json::object();
  for (const auto& [claim, w] : windows.items()) {
    if (claim != "thm1" && claim != "thm2" && claim != "thm4" && claim != "cor1" && claim != "cor2")
      config_error("windows: unknown claim '" + claim + "'");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer())
      config_error("windows." + claim + " must be [lo, hi]");
    c.windows.push_back({claim, {w[0].get<int>(), w[1].get<int>()}});
    canon["windows"][claim] = w;
  }

  const json series = j.value("series", json::object());
  c.k_grid = get<std::vector<double>>(series, "k_grid", c.k_grid);
  for (double k : c.k_grid)
    if (!(k > 0)) config_error("k_grid entries must be positive");
  if (series.contains("z_grid")) {
    c.z_grid.clear();
    for (const auto& z : series["z_grid"]) c.z_grid.push_back(parse_complex(z));
  }
  for (const auto& z : c.z_grid)
    if (!(z.real() > 1.0)) config_error("z_grid entries need Re z > 1");
  c.dirichlet_N = get<int>(series, "dirichlet_N", c.dirichlet_N);
  c.rho_z = get<std::vector<double>>(series, "rho_z", c.rho_z);
  c.meissel_tail = get<double>(series, "meissel_tail", c.meissel_tail);
  const int fit_hi = std::max(std::min(c.n_max, 12), 4);
  const auto fit = get<std::vector<int>>(series, "lambda_fit", {std::max(1, std::min(5, fit_hi - 3)), fit_hi});
  if (fit.size() != 2 || fit[0] < 1 || fit[1] - fit[0] < 3) config_error("lambda_fit must be [lo, hi] spanning >= 4 values");
  c.lambda_fit = {fit[0], fit[1]};
  if (c.dirichlet_N < 1 || !(c.meissel_tail > 0)) config_error("dirichlet_N and meissel_tail must be positive");
  json zs = json::array();
  for (auto z : c.z_grid) zs.push_back(complex_json(z));
  canon["series"] = {{"k_grid", c.k_grid},           {"z_grid", zs},         {"dirichlet_N", c.dirichlet_N},
                     {"rho_z", c.rho_z},             {"meissel_tail", c.meissel_tail},
                     {"lambda_fit", {fit[0], fit[1]}}};

  c.corollary_n = get<int>(j, "corollary_n", std::min(c.n_max, 12));
  c.orbits_n = get<int>(j, "orbits_n", c.orbits_n);
  c.selftest_n = get<int>(j, "selftest_n", c.selftest_n);
  if (c.corollary_n < 1 || c.orbits_n < 1 || c.selftest_n < 1) config_error("corollary_n, orbits_n, selftest_n must be >= 1");
  canon["corollary_n"] = c.corollary_n;
  canon["orbits_n"] = c.orbits_n;
  canon["selftest_n"] = c.selftest_n;

  const json output = j.value("output", json::object());
  c.output_directory = get<std::string>(output, "directory", c.output_directory);
  c.formats = get<std::vector<std::string>>(output, "formats", c.formats);
  for (const auto& f : c.formats)
    if (f != "csv" && f != "json" && f != "plotdata") config_error("unknown output format '" + f + "'");
  canon["output"] = {{"directory", c.output_directory}, {"formats", c.formats}};

  canon["deterministic"] = true;
  if (!get<bool>(j, "deterministic", true)) c.warnings.push_back("deterministic is always on");
  const int threads = get<int>(j, "threads", 1);
  if (threads < 1) config_error("threads must be >= 1");
  c.skew.threads = static_cast<unsigned>(threads);
  canon["threads"] = threads;

  static const char* known[] = {"maps",    "potential",   "n_max",    "N_max",     "lambda",     "mode",
                                "fiber",   "tolerances",  "caps",     "precision", "burn_in",    "band_ceiling",
                                "windows", "series",      "corollary_n", "orbits_n", "selftest_n", "output",
                                "deterministic", "threads"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      config_error("unknown key '" + key + "'");
  }

  c.canonical = canon.dump();
  json hashed = canon;
  hashed.erase("threads");
  hashed["output"].erase("directory");
  c.digest = hex64(fnv1a(hashed.dump()));
  return c;
}

CountTable build_table(const ExperimentConfig& c, int n) {
  const auto degrees = degrees_of(c);
  const auto kind = c.potential.kind();
  const bool sphere = c.fiber == FiberFilter::All;
  if (c.mode == TableMode::Exact || (c.mode == TableMode::Auto && sphere && kind == Potential::Kind::Zero))
    return build_exact_table(degrees, n);
  if (c.mode == TableMode::Auto && sphere &&
      (kind == Potential::Kind::Constant || kind == Potential::Kind::SymbolWeight))
    return build_word_potential_table(degrees, c.potential, n);
  const SkewSystem sys(c.maps, c.skew);
  return build_enumerated_table(sys, c.potential, n, c.fiber);
}

RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config) {
  if (subcommand == "count") return run_count(config);
  if (subcommand == "orbits") return run_orbits(config);
  if (subcommand == "verify") return run_verify(config);
  if (subcommand == "series") return run_series(config);
  if (subcommand == "repelling") return run_repelling(config);
  if (subcommand == "selftest") return run_selftest(config);
  config_error("unknown subcommand '" + subcommand + "'");
}

void write_outputs(const RunResult& result, const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + directory + ": " + ec.message());
  for (const auto& f : result.files) {
    const auto path = std::filesystem::path(directory) / f.name;
    std::ofstream out(path, std::ios::binary);
    out << f.content;
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  }
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::Io:
    case ErrorKind::WindowTooShort:
    case ErrorKind::NonpositiveComparator:
    case ErrorKind::LambdaNotPositive:
    case ErrorKind::OutsideRadius:
    case ErrorKind::MissingDivisorData:
      return 2;
    case ErrorKind::HypothesisImplausible:
      return 1;
    default:
      return 3;
  }
}

std::string error_record(ErrorKind kind, const std::string& message) {
  return json{{"error", {{"kind", std::string(to_string(kind))}, {"message", message}, {"exit_code", exit_code_for(kind)}}}}
      .dump();
}

}  // namespace skewcount
