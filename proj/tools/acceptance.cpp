// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skewcount/analysis.hpp"
#include "skewcount/error.hpp"
#include "skewcount/experiment.hpp"
#include "skewcount/numtheory.hpp"

using namespace skewcount;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

RationalMap poly_map(std::initializer_list<Complex> c) { return RationalMap::polynomial(ComplexPoly(c)); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const CountTable& reference_table() {
  static const CountTable t = build_exact_table({2, 2}, 1000);
  return t;
}

std::vector<double> band_of(const std::vector<double>& ratios) {
  double lo = ratios.front(), hi = ratios.front();
  for (double r : ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi, hi / lo};
}

Outcome c1_enumeration() {
  const auto start = std::chrono::steady_clock::now();
  const SkewSystem sys({poly_map({0.0, 0.0, 1.0}), poly_map({0.0, 0.0, 0.0, 1.0})});
  const auto t = build_enumerated_table(sys, Potential::zero(), 4);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = secs <= 60.0;
  std::string d;
  long long five = 1, two = 1;
  for (int n = 1; n <= 4; ++n) {
    five *= 5;
    two *= 2;
    ok = ok && t.E(n) == static_cast<double>(five + two);
    d += "E(" + std::to_string(n) + ")=" + t.E_text(n) + " ";
  }
  return {ok, d + "in " + fmt(secs) + " s"};
}

Outcome c2_mobius() {
  const auto& t = reference_table();
  int mismatch = 0;
  for (int n = 1; n <= 200; ++n)
    if (C_mobius_exact(t, n) != t.C_exact(n)) ++mismatch;
  const SkewSystem sys({poly_map({0.0, 0.0, 1.0}), poly_map({0.0, 0.0, 0.0, 1.0})});
  const auto w = build_enumerated_table(sys, Potential::symbol_weight({0.1, -0.2}), 4);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) worst = std::max(worst, std::abs(C_mobius_floating(w, n) / w.C(n) - 1.0));
  return {mismatch == 0 && worst <= 1e-6,
          "exact mismatches " + std::to_string(mismatch) + ", numeric max rel err " + fmt(worst)};
}

Outcome c3_identities() {
  const auto& t = reference_table();
  int bad = 0;
  for (int n = 1; n <= 200; ++n) {
    if (t.D_exact(n) != BigInt(n) * t.C_exact(n)) ++bad;
    if (t.C_exact(n) < 0) ++bad;
    BigInt sum = 0;
    for (auto d : divisors(n)) sum += BigInt(d) * t.C_exact(static_cast<int>(d));
    if (sum != t.E_exact(n)) ++bad;
  }
  return {bad == 0 && convolution_failure(t, 200) == 0, std::to_string(bad) + " violations for n <= 200"};
}

Outcome c4_theorem1() {
  BandOptions o;
  o.burn_in = 10;
  const auto r = verify_theorem_1(reference_table(), 4.0, 25, o);
  std::vector<double> ratios;
  for (const auto& p : r.points) ratios.push_back(p.ratio);
  const auto b = band_of(ratios);
  const bool ok = r.points.size() == 16 && b[0] >= 1.25 && b[1] <= 1.40 && r.band_ratio <= 1.1;
  return {ok, "ratios " + fmt(b[0]) + ".." + fmt(b[1]) + ", band " + fmt(r.band_ratio)};
}

Outcome c5_theorem2() {
  const auto& t = reference_table();
  double lo = 1e300, hi = -1e300;
  for (int N = 500; N <= 1000; ++N) {
    const double d = mertens_sum(t, 4.0, N) - std::log(double(N));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {hi - lo <= 1e-2, "Mertens - log N spans " + fmt(lo) + ".." + fmt(hi)};
}

Outcome c6_theorem3() {
  const std::vector<double> ks{0.1, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> vals;
  double worst_tail = 0.0;
  for (double k : ks) {
    const auto v = meissel_sum(reference_table(), 4.0, k, 1e-6);
    vals.push_back(k * v.value.real());
    worst_tail = std::max(worst_tail, v.truncation ? v.truncation->tail_bound : INFINITY);
  }
  const auto b = band_of(vals);
  return {b[2] <= 3.0 && worst_tail <= 1e-6,
          "k*Meissel " + fmt(b[0]) + ".." + fmt(b[1]) + ", band " + fmt(b[2]) + ", max tail " + fmt(worst_tail)};
}

Outcome c7_theorem4() {
  BandOptions o;
  o.burn_in = 10;
  const auto r = verify_theorem_4(reference_table(), 4.0, {Complex(2.0, 0.0)}, 40, o);
  const auto& rep = r.per_z.front().second;
  const bool ok = r.convolution_holds && r.convolution_checked_to >= 40 && std::isfinite(rep.band_ratio) &&
                  rep.band_ratio > 0.0 && rep.points.size() == 31;
  return {ok, "convolution to " + std::to_string(r.convolution_checked_to) + ", z=2 band " + fmt(rep.band_ratio)};
}

Outcome c8_rho() {
  const auto& t = reference_table();
  const double radius = radius_estimate(t, 5, 20);
  std::vector<double> ratios;
  for (double z : {0.125, 0.225, 0.2475}) {
    const auto v = rho_series(t, Complex(z, 0.0), 1.0 / radius);
    ratios.push_back(v.value.real() / -std::log1p(-4.0 * z));
  }
  const auto b = band_of(ratios);
  return {std::abs(radius / 0.25 - 1.0) <= 0.01 && b[2] <= 2.0,
          "radius " + fmt(radius) + ", rho ratios " + fmt(b[0]) + ".." + fmt(b[1]) + ", band " + fmt(b[2])};
}

Outcome c9_corollary2() {
  SkewOptions so;
  so.max_degree = 4096;
  const SkewSystem sq({poly_map({0.0, 0.0, 1.0})}, so);
  const double c = 0.3;
  const auto t = build_enumerated_table(sq, Potential::constant(c), 12, FiberFilter::Julia);
  const double lambda = 2.0 * std::exp(c);
  const double est = lambda_estimate(t, 4, 12).lambda;
  CorollaryOptions opt;
  opt.prefix = "cor2";
  const auto reports = verify_corollary(t, lambda, opt);
  bool ok = std::abs(est / lambda - 1.0) <= 0.02 && reports.size() == 4;
  std::string d = "lambda " + fmt(est) + " vs " + fmt(lambda) + ", bands";
  for (const auto& r : reports) {
    ok = ok && std::isfinite(r.band_ratio) && r.band_ratio <= 4.0;
    d += " " + fmt(r.band_ratio);
  }
  return {ok, d};
}

Outcome c10_repelling() {
  SkewOptions so;
  so.max_degree = 4096;
  bool ok = true;
  std::string d = "z^2:";
  for (const auto& row : verify_repelling_bounds(SkewSystem({poly_map({0.0, 0.0, 1.0})}, so), 6)) {
    ok = ok && row.holds && row.repelling == (1 << row.n) - 1;
    d += " " + std::to_string(row.repelling);
  }
  d += "; z^2-1:";
  for (const auto& row : verify_repelling_bounds(SkewSystem({poly_map({-1.0, 0.0, 1.0})}, so), 5)) {
    ok = ok && row.holds;
    d += " " + std::to_string(row.repelling);
  }
  return {ok, d};
}

Outcome c11_hygiene() {
  bool ok = true;
  double worst = 0.0;
  for (std::int64_t N : {100, 1000, 10000}) {
    const double gap = std::abs(harmonic_sum(N) - std::log(double(N)) - double(kEulerGamma));
    ok = ok && gap <= 1.0 / N;
    worst = std::max(worst, gap * N);
  }
  const double z2 = zeta(Complex(2.0, 0.0), 1e-12).value.real();
  ok = ok && std::abs(z2 - 1.6449340668) <= 1e-8;

  std::mt19937_64 rng(20261015);
  std::uniform_int_distribution<int> len(1, 200);
  std::uniform_int_distribution<long long> val(-1'000'000'000, 1'000'000'000);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int N = len(rng);
    std::map<int, BigInt> C, E;
    for (int n = 1; n <= N; ++n) C[n] = val(rng);
    for (int n = 1; n <= N; ++n)
      for (auto d : divisors(n)) E[n] += BigInt(d) * C[static_cast<int>(d)];
    for (int n = 1; n <= N; ++n)
      if (C_mobius(E, n) != C[n]) ++failures;
  }
  ok = ok && failures == 0;
  return {ok, "max N*|H_N - log N - gamma| " + fmt(worst) + ", zeta(2) " + fmt(z2) + ", round-trip failures " +
                  std::to_string(failures)};
}

Outcome c12_determinism() {
  std::ifstream in(std::string(SKEWCOUNT_CONFIGS) + "/reference.json");
  if (!in) return {false, "reference config not found"};
  std::ostringstream text;
  text << in.rdbuf();
  const auto one = run_experiment("verify", parse_config(text.str(), {"threads=1"}));
  const auto four = run_experiment("verify", parse_config(text.str(), {"threads=4"}));
  bool ok = one.files.size() == four.files.size() && !one.files.empty();
  int compared = 0;
  for (std::size_t i = 0; ok && i < one.files.size(); ++i) {
    ok = one.files[i].name == four.files[i].name && one.files[i].content == four.files[i].content;
    ++compared;
  }
  return {ok, std::to_string(compared) + " files compared"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact-count oracle equivalence", c1_enumeration},
      {"Moebius pipeline agreement", c2_mobius},
      {"structural identities", c3_identities},
      {"prime orbit count at desk scale", c4_theorem1},
      {"Mertens sum against log N", c5_theorem2},
      {"Meissel sum band over k", c6_theorem3},
      {"Dirichlet convolution and matched truncation", c7_theorem4},
      {"rho radius and band", c8_rho},
      {"single-map Julia corollary", c9_corollary2},
      {"repelling census", c10_repelling},
      {"numerics hygiene", c11_hygiene},
      {"determinism across thread counts", c12_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
