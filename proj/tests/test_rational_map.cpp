#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "skewcount/error.hpp"
#include "skewcount/rational_map.hpp"

using namespace skewcount;

namespace {

RationalMap poly_map(std::initializer_list<Complex> c) { return RationalMap::polynomial(ComplexPoly(c)); }

const RationalMap kSquare = poly_map({0.0, 0.0, 1.0});
const RationalMap kBasilica = poly_map({-1.0, 0.0, 1.0});
const RationalMap kInverse(ComplexPoly{1.0}, ComplexPoly{0.0, 1.0});

bool same_point(const SpherePoint& a, const SpherePoint& b, double tol = 1e-12) {
  return chordal_distance(a, b) <= tol;
}

/// Ratio of polynomial coefficient lists, compared after normalising both so
/// the numerator's leading coefficient is 1.
void check_map_equals(const RationalMap& got, const std::vector<Complex>& num, const std::vector<Complex>& den) {
  const Complex scale = got.numerator().leading() / num.back();
  REQUIRE(got.numerator().degree() + 1 == int(num.size()));
  REQUIRE(got.denominator().degree() + 1 == int(den.size()));
  for (std::size_t i = 0; i < num.size(); ++i) CHECK(std::abs(got.numerator()[i] - scale * num[i]) < 1e-12);
  for (std::size_t i = 0; i < den.size(); ++i) CHECK(std::abs(got.denominator()[i] - scale * den[i]) < 1e-12);
}

RationalMap random_map(std::mt19937_64& rng, int deg_p, int deg_q) {
  std::normal_distribution<double> g;
  std::vector<Complex> p(deg_p + 1), q(deg_q + 1);
  for (auto& c : p) c = {g(rng), g(rng)};
  for (auto& c : q) c = {g(rng), g(rng)};
  return RationalMap(ComplexPoly(p), ComplexPoly(q));
}

}  // namespace

TEST_CASE("SpherePoint ordering puts infinity last") {
  CHECK(SpherePoint::finite(1.0) < SpherePoint::finite({1.0, 0.5}));
  CHECK(SpherePoint::finite(1e300) < SpherePoint::infinity());
  CHECK(SpherePoint::infinity() == SpherePoint::infinity());
  CHECK_THROWS_AS(SpherePoint::finite({NAN, 0.0}), Error);
  CHECK(chordal_distance(SpherePoint::finite(0.0), SpherePoint::infinity()) == doctest::Approx(2.0));
}

TEST_CASE("RationalMap validation") {
  CHECK(kSquare.degree() == 2);
  CHECK(kInverse.degree() == 1);
  CHECK_THROWS_AS(RationalMap(ComplexPoly{1.0}, ComplexPoly{}), Error);
  CHECK_THROWS_AS(RationalMap(ComplexPoly{2.0}, ComplexPoly{1.0}), Error);
  try {
    // (z-1)(z+2) / (z-1)
    RationalMap(ComplexPoly{-2.0, 1.0, 1.0}, ComplexPoly{-1.0, 1.0});
    FAIL("expected coprimality failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCoprime);
  }
}

TEST_CASE("eval_sphere") {
  CHECK(same_point(eval_sphere(kSquare, SpherePoint::finite(2.0)), SpherePoint::finite(4.0)));
  CHECK(eval_sphere(kSquare, SpherePoint::infinity()).is_infinity());
  CHECK(eval_sphere(kInverse, SpherePoint::finite(0.0)).is_infinity());
  CHECK(same_point(eval_sphere(kInverse, SpherePoint::infinity()), SpherePoint::finite(0.0)));
  const RationalMap mobius(ComplexPoly{1.0, 2.0}, ComplexPoly{3.0, 4.0});
  CHECK(same_point(eval_sphere(mobius, SpherePoint::infinity()), SpherePoint::finite(0.5)));
  // large argument stays finite
  CHECK(same_point(eval_sphere(kSquare, SpherePoint::finite(1e100)), SpherePoint::infinity(), 1e-100));
  CHECK(same_point(eval_sphere(kSquare, SpherePoint::finite(1e10)), SpherePoint::finite(1e20)));
}

TEST_CASE("compose examples") {
  const auto z4 = compose(kSquare, kSquare);
  CHECK(z4.degree() == 4);
  check_map_equals(z4, {0, 0, 0, 0, 1}, {1});

  const auto sq_basilica = compose(kSquare, kBasilica);
  CHECK(sq_basilica.degree() == 4);
  check_map_equals(sq_basilica, {1, 0, -2, 0, 1}, {1});

  // (z^2 - 1) o (1/z) = (1 - z^2) / z^2, derived by expanding 1/z^2 - 1.
  const auto inv = compose(kBasilica, kInverse);
  CHECK(inv.degree() == 2);
  check_map_equals(inv, {1, 0, -1}, {0, 0, 1});
}

TEST_CASE("compose matches symbolic expansion oracle for triple basilica") {
  auto inner = kBasilica;
  inner = compose(kBasilica, inner);
  inner = compose(kBasilica, inner);
  CHECK(inner.degree() == 8);
  std::vector<std::complex<long double>> b{-1.0L, 0.0L, 1.0L};
  const auto expanded = oracle::poly_compose(b, oracle::poly_compose(b, b));
  REQUIRE(expanded.size() == 9);
  std::vector<Complex> num;
  for (auto c : expanded) num.emplace_back(double(c.real()), double(c.imag()));
  check_map_equals(inner, num, {1});
  // largest coefficient magnitude renormalised to 1
  CHECK(std::max(inner.numerator().max_abs(), inner.denominator().max_abs()) == doctest::Approx(1.0));
}

TEST_CASE("composition degree and evaluation agree with sequential evaluation") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const auto R = random_map(rng, 2, 1 + trial % 3);
    const auto S = random_map(rng, 1 + trial % 2, 2);
    const auto RS = compose(R, S);
    REQUIRE(RS.degree() == R.degree() * S.degree());
    int checked = 0;
    while (checked < 100) {
      const auto p = SpherePoint::finite({g(rng), g(rng)});
      const auto inner = eval_sphere(S, p);
      if (inner.is_infinity() || std::abs(S.denominator()(p.value())) < 1e-3) continue;
      const auto expected = eval_sphere(R, inner);
      if (expected.is_infinity() || std::abs(R.denominator()(inner.value())) < 1e-3) continue;
      const auto got = eval_sphere(RS, p);
      REQUIRE(got.is_finite());
      CHECK(std::abs(got.value() - expected.value()) <= 1e-8 * std::max(1.0, std::abs(expected.value())));
      ++checked;
    }
  }
}

TEST_CASE("composition keeps degree when only one leading coefficient cancels") {
  // inner has leading pair (a, b) = (1, 1); outer numerator z - 1 vanishes there.
  const RationalMap outer(ComplexPoly{-1.0, 1.0}, ComplexPoly{2.0, 1.0});
  const RationalMap inner(ComplexPoly{3.0, 0.0, 1.0}, ComplexPoly{1.0, 0.0, 1.0});
  const auto ok = compose(outer, inner);
  CHECK(ok.degree() == 2);
  CHECK(ok.numerator().degree() < 2);
}

TEST_CASE("degenerate composition is rejected") {
  // Outer numerator and denominator both nearly vanish at inner(inf) = 1.
  MapTolerances loose;
  loose.coprime_tol = 1e-15;
  const RationalMap outer(ComplexPoly{-1.0, 1.0}, ComplexPoly{-(1.0 + 1e-13), 1.0}, loose);
  const RationalMap inner(ComplexPoly{3.0, 0.0, 1.0}, ComplexPoly{1.0, 0.0, 1.0});
  try {
    compose(outer, inner);
    FAIL("expected degenerate composition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateComposition);
  }
}

TEST_CASE("derivative examples") {
  const auto d_sq = derivative(kSquare);
  CHECK(same_point(d_sq(SpherePoint::finite(3.0)), SpherePoint::finite(6.0)));
  const auto d_b = derivative(kBasilica);
  CHECK(same_point(d_b(SpherePoint::finite({1.0, 1.0})), SpherePoint::finite({2.0, 2.0})));
  const auto d_inv = derivative(kInverse);
  CHECK(same_point(d_inv(SpherePoint::finite(2.0)), SpherePoint::finite(-0.25)));
}

TEST_CASE("chain rule: derivative of composition") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const auto R = random_map(rng, 2, 2);
  const auto S = random_map(rng, 3, 1);
  const auto RS = compose(R, S);
  const auto dR = derivative(R);
  const auto dS = derivative(S);
  const auto dRS = derivative(RS);
  for (int i = 0; i < 100; ++i) {
    const auto p = SpherePoint::finite({g(rng), g(rng)});
    const auto sp = eval_sphere(S, p);
    const auto a = dS(p);
    if (!sp.is_finite() || !a.is_finite()) continue;
    const auto b = dR(sp);
    const auto c = dRS(p);
    if (!b.is_finite() || !c.is_finite()) continue;
    const Complex expected = a.value() * b.value();
    CHECK(std::abs(c.value() - expected) <= 1e-6 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("fixed point polynomial") {
  const auto a = fixed_point_polynomial(kSquare);
  CHECK(a.F == ComplexPoly{0.0, -1.0, 1.0});
  CHECK(a.infinity_multiplicity == 1);
  const auto b = fixed_point_polynomial(kBasilica);
  CHECK(b.F == ComplexPoly{-1.0, -1.0, 1.0});
  CHECK(b.infinity_multiplicity == 1);
  const auto c = fixed_point_polynomial(kInverse);
  CHECK(c.F == ComplexPoly{1.0, 0.0, -1.0});
  CHECK(c.infinity_multiplicity == 0);
  // z + 1/z: F = 1, so all three fixed points sit at infinity.
  const RationalMap parabolic(ComplexPoly{1.0, 0.0, 1.0}, ComplexPoly{0.0, 1.0});
  const auto d = fixed_point_polynomial(parabolic);
  CHECK(d.F.degree() == 0);
  CHECK(d.infinity_multiplicity == 3);
  const RationalMap identity = RationalMap::polynomial(ComplexPoly{0.0, 1.0});
  try {
    fixed_point_polynomial(identity);
    FAIL("expected total degeneration");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TotalDegeneration);
  }
}

TEST_CASE("fixed point count is degree + 1") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto R = random_map(rng, 1 + trial % 4, trial % 3);
    const auto fp = fixed_point_polynomial(R);
    int total = fp.infinity_multiplicity;
    for (const auto& r : roots(fp.F)) total += r.multiplicity;
    CHECK(total == R.degree() + 1);
  }
}
