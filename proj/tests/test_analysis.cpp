#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "skewcount/analysis.hpp"
#include "skewcount/error.hpp"

using namespace skewcount;

namespace {

RationalMap poly_map(std::initializer_list<Complex> c) { return RationalMap::polynomial(ComplexPoly(c)); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

const CountTable& reference_table() {
  static const CountTable t = build_exact_table({2, 2}, 1000);
  return t;
}

std::vector<double> range(int lo, int hi) {
  std::vector<double> x;
  for (int n = lo; n <= hi; ++n) x.push_back(n);
  return x;
}

}  // namespace

TEST_CASE("ratio_band examples") {
  const auto x = range(1, 10);
  std::vector<double> B;
  for (double v : x) B.push_back(std::pow(1.5, v));
  const auto same = ratio_band("t", x, B, B, {0.0, 4.0});
  CHECK(same.kappa1 == 1.0);
  CHECK(same.kappa2 == 1.0);
  CHECK(same.band_ratio == 1.0);
  CHECK(same.pass);

  std::vector<double> twice;
  for (double v : B) twice.push_back(2.0 * v);
  const auto doubled = ratio_band("t", x, twice, B, {0.0, 4.0});
  CHECK(doubled.kappa1 == 2.0);
  CHECK(doubled.kappa2 == 2.0);

  const auto n = range(1, 20);
  std::vector<double> A4, B4;
  for (double v : n) {
    A4.push_back(std::pow(4.0, v) + std::pow(2.0, v));
    B4.push_back(std::pow(4.0, v));
  }
  const auto r = ratio_band("t", n, A4, B4, {5.0, 4.0});
  CHECK(r.points.size() == 16);
  CHECK(r.points.front().x == 5.0);
  CHECK(r.band_ratio <= 1.04);
  CHECK(r.band_ratio == doctest::Approx(1.0 + std::pow(2.0, -5)).epsilon(1e-4));
}

TEST_CASE("ratio_band errors and verdicts") {
  const auto x = range(1, 6);
  const std::vector<double> ones(6, 1.0);
  CHECK(kind_of([&] { ratio_band("t", x, ones, ones, {3.0, 4.0}); }) == ErrorKind::WindowTooShort);
  std::vector<double> B = ones;
  B[3] = 0.0;
  CHECK(kind_of([&] { ratio_band("t", x, ones, B, {0.0, 4.0}); }) == ErrorKind::NonpositiveComparator);
  const std::vector<double> zeros(6, 0.0);
  const auto z = ratio_band("t", x, zeros, ones, {0.0, 4.0});
  CHECK(!z.pass);
  CHECK(!z.failure.empty());
  std::vector<double> wide = ones;
  wide[5] = 5.0;
  const auto w = ratio_band("t", x, wide, ones, {0.0, 4.0});
  CHECK(w.band_ratio == 5.0);
  CHECK(!w.pass);
}

TEST_CASE("ratio_band is scale equivariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = range(1, 12);
    std::vector<double> A, B, cA;
    const double c = u(rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
      A.push_back(u(rng));
      B.push_back(u(rng));
      cA.push_back(c * A.back());
    }
    const auto r = ratio_band("t", x, A, B, {0.0, 1e9});
    const auto s = ratio_band("t", x, cA, B, {0.0, 1e9});
    CHECK(s.kappa1 == doctest::Approx(c * r.kappa1).epsilon(1e-12));
    CHECK(s.kappa2 == doctest::Approx(c * r.kappa2).epsilon(1e-12));
    CHECK(s.band_ratio == doctest::Approx(r.band_ratio).epsilon(1e-12));
  }
}

TEST_CASE("theorem 1 on the reference system") {
  const auto& t = reference_table();
  const auto r = verify_theorem_1(t, 4.0, 25, {10.0, 4.0});
  CHECK(r.points.size() == 16);
  // oracle: exact pi_S from the closed formula
  const auto C = oracle::orbit_counts_formula({2, 2}, 25);
  oracle::BigInt pi = 0;
  for (int N = 1; N <= 25; ++N) {
    pi += C[static_cast<std::size_t>(N)];
    if (N < 10) continue;
    const long double expected = static_cast<long double>(pi) * N / std::pow(4.0L, N);
    CHECK(r.points[static_cast<std::size_t>(N - 10)].ratio == doctest::Approx(double(expected)).epsilon(1e-12));
  }
  CHECK(r.kappa1 >= 1.25);
  CHECK(r.kappa2 <= 1.40);
  CHECK(r.band_ratio <= 1.1);
  CHECK(r.pass);

  const auto w = verify_theorem_1(t, 4.0, 25, {5.0, 4.0});
  CHECK(w.kappa1 >= 1.30);
  CHECK(w.kappa2 <= 1.60);

  CHECK(kind_of([&] { verify_theorem_1(t, 1.0, 25, {}); }) == ErrorKind::LambdaNotPositive);
  CHECK(kind_of([&] { verify_theorem_1(t, 4.0, 8, {5.0, 4.0}); }) == ErrorKind::WindowTooShort);
}

TEST_CASE("theorem 1 band narrows as the burn-in grows") {
  const auto& t = reference_table();
  double prev = INFINITY;
  for (int b = 1; b <= 25; ++b) {
    const double band = verify_theorem_1(t, 4.0, 30, {double(b), 4.0}).band_ratio;
    CHECK(band <= prev);
    prev = band;
  }
}

TEST_CASE("theorem 2 on the reference system") {
  const auto& t = reference_table();
  const auto r = verify_theorem_2(t, 4.0, 1000, {100.0, 4.0});
  CHECK(r.points.size() == 901);
  CHECK(r.band_ratio <= 1.5);
  CHECK(r.pass);
  // Mertens(N) - log N settles on a plateau
  const double d500 = r.points[400].A - std::log(500.0);
  const double d1000 = r.points[900].A - std::log(1000.0);
  CHECK(std::abs(d500 - d1000) <= 1e-2);
  CHECK(d1000 == doctest::Approx(1.027178859024).epsilon(1e-9));

  CHECK(kind_of([&] { verify_theorem_2(t, 4.0, 10, {1.0, 4.0}); }) == ErrorKind::NonpositiveComparator);

  const auto zero = CountTable::floating(std::vector<double>(11, 0.0), std::vector<double>(11, 0.0));
  const auto z = verify_theorem_2(zero, 4.0, 10, {2.0, 4.0});
  CHECK(!z.pass);
  CHECK(z.kappa2 == 0.0);
}

TEST_CASE("theorem 3 on the reference system") {
  const auto t = build_exact_table({2, 2}, 200);
  const auto r = verify_theorem_3(t, 4.0, {0.1, 0.5, 1.0, 2.0, 5.0}, {0.0, 4.0});
  // k * A(k) from the truncated-sum oracle at N = 10^6
  const std::vector<double> kA{1.1036680936, 1.5373079215, 2.1172193635, 3.3750946812, 7.5771528244};
  REQUIRE(r.points.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(r.points[i].ratio - kA[i]) < 1e-6);
  CHECK(r.band_ratio == doctest::Approx(7.5771528244 / 1.1036680936).epsilon(1e-6));
  CHECK(r.context[1].second <= 1e-6);
  // k A(k) tends to k C(1)/lambda for large k, so no ceiling of 3 can hold
  CHECK(r.band_ratio > 3.0);
  CHECK(!r.pass);
  CHECK(kind_of([&] { verify_theorem_3(t, 4.0, {0.1, 0.5, 0.0, 2.0, 5.0}, {}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("theorem 4 on the reference system") {
  const auto& t = reference_table();
  const auto r = verify_theorem_4(t, 4.0, {{2.0, 0.0}, {3.0, 1.0}}, 40, {10.0, 4.0});
  CHECK(r.convolution_holds);
  CHECK(r.convolution_checked_to == 40);
  REQUIRE(r.per_z.size() == 2);
  for (const auto& [z, rep] : r.per_z) {
    CHECK(rep.points.size() == 31);
    CHECK(std::isfinite(rep.band_ratio));
    CHECK(rep.kappa1 > 0.0);
  }
  CHECK(r.pass());
  const auto empty = verify_theorem_4(t, 4.0, {}, 40, {10.0, 4.0});
  CHECK(empty.per_z.empty());
  CHECK(empty.convolution_holds);
}

TEST_CASE("rho against log(1/(1 - z lambda))") {
  const auto& t = reference_table();
  const double lambda_hat = 1.0 / radius_estimate(t, 5, 20);
  const auto r = verify_rho(t, 4.0, lambda_hat, {0.05, 0.1, 0.125, 0.175, 0.225, 0.2475}, {0.0, 2.0});
  CHECK(r.pass);
  CHECK(r.band_ratio <= 2.0);
  // closed form for f = 0
  for (const auto& p : r.points) {
    const double rho = -std::log(1.0 - 4.0 * p.x) - std::log(1.0 - 2.0 * p.x);
    CHECK(p.A == doctest::Approx(rho).epsilon(1e-6));
  }
  CHECK(kind_of([&] { verify_rho(t, 4.0, lambda_hat, {0.1, 0.2, 0.25, 0.05, 0.01}, {}); }) == ErrorKind::OutsideRadius);
}

TEST_CASE("single map corollary on the Julia set") {
  SkewOptions o;
  o.max_degree = 4096;
  const SkewSystem sq({poly_map({0.0, 0.0, 1.0})}, o);
  const double c = 0.3;
  const auto t = build_enumerated_table(sq, Potential::constant(c), 12, FiberFilter::Julia);
  const double lambda = 2.0 * std::exp(c);
  CHECK(std::abs(lambda_estimate(t, 4, 12).lambda - lambda) <= 0.02 * lambda);
  CorollaryOptions opt;
  opt.prefix = "cor2";
  const auto reports = verify_corollary(t, lambda, opt);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].claim == "cor2.1");
  CHECK(reports[3].claim == "cor2.4");
  for (const auto& r : reports) {
    CHECK(std::isfinite(r.band_ratio));
    CHECK(r.band_ratio <= 4.0);
  }
}

TEST_CASE("f = 0 corollary uses lambda = sum of degrees") {
  const auto t = build_exact_table({2, 3}, 60);
  CorollaryOptions opt;
  opt.N_max = 40;
  const auto reports = verify_corollary(t, 5.0, opt);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].claim == "cor1.1");
  CHECK(reports[0].pass);
  CHECK(reports[1].pass);
  CHECK(reports[3].pass);
}

TEST_CASE("repelling census for z^2") {
  const SkewSystem sq({poly_map({0.0, 0.0, 1.0})});
  const auto rows = verify_repelling_bounds(sq, 6);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].repelling == 1);
  CHECK(rows[0].lower == -2.0);
  CHECK(rows[0].upper == 4.0);
  CHECK(rows[1].repelling == 3);
  CHECK(rows[1].lower == -6.0);
  CHECK(rows[1].upper == 8.0);
  for (const auto& row : rows) {
    CHECK(row.points == (1 << row.n) + 1);
    CHECK(row.repelling == (1 << row.n) - 1);
    CHECK(row.nonrepelling == 2);
    CHECK(row.undefined == 0);
    CHECK(row.holds);
  }
}

TEST_CASE("repelling census for z^2 - 1") {
  const SkewSystem basilica({poly_map({-1.0, 0.0, 1.0})});
  const auto rows = verify_repelling_bounds(basilica, 5);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].repelling == 2);  // (1 +- sqrt 5)/2, multipliers 1 +- sqrt 5
  CHECK(rows[1].repelling == 2);  // the 2-cycle {0, -1} is superattracting
  for (const auto& row : rows) CHECK(row.holds);
  CHECK_THROWS_AS(verify_repelling_bounds(SkewSystem({poly_map({0.0, 1.0})}), 3), Error);
}

TEST_CASE("repelling census flags undefined multipliers") {
  // 1/z^2 swaps 0 and infinity, neither multiplier is computable
  const SkewSystem inv({RationalMap(ComplexPoly({1.0}), ComplexPoly({0.0, 0.0, 1.0}))});
  const auto rows = verify_repelling_bounds(inv, 2);
  CHECK(rows[1].undefined == 2);
  CHECK(!rows[1].notes.empty());
  for (const auto& row : rows) CHECK(row.holds);
}
