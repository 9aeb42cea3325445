#include <chrono>
#include <numbers>
#include <random>

#include "doctest.h"
#include "roots_impl.hpp"
#include "skewcount/error.hpp"
#include "skewcount/polynomial.hpp"

using namespace skewcount;

namespace {

bool has_root(const std::vector<Root>& rs, Complex z, int mult, double tol = 1e-10) {
  for (const auto& r : rs)
    if (std::abs(r.value - z) <= tol && r.multiplicity == mult) return true;
  return false;
}

int total_multiplicity(const std::vector<Root>& rs) {
  int t = 0;
  for (const auto& r : rs) t += r.multiplicity;
  return t;
}

ComplexPoly from_roots(const std::vector<Complex>& zs) {
  ComplexPoly p{1.0};
  for (auto z : zs) p = p * ComplexPoly{-z, 1.0};
  return p;
}

}  // namespace

TEST_CASE("ComplexPoly basics") {
  ComplexPoly p{1.0, 0.0, 0.0};
  CHECK(p.degree() == 0);
  CHECK(ComplexPoly{}.degree() == -1);
  CHECK(ComplexPoly{}.is_zero());
  ComplexPoly q{-1.0, 0.0, 1.0};
  CHECK(q(Complex(2.0)) == Complex(3.0));
  CHECK(q.derivative() == ComplexPoly{0.0, 2.0});
  CHECK((q - q).is_zero());
  CHECK((q * q).degree() == 4);
  CHECK(ComplexPoly::monomial(3).leading() == Complex(1.0));
}

TEST_CASE("roots of z^2 - z") {
  const auto rs = roots(ComplexPoly{0.0, -1.0, 1.0});
  REQUIRE(rs.size() == 2);
  CHECK(has_root(rs, 0.0, 1));
  CHECK(has_root(rs, 1.0, 1));
}

TEST_CASE("roots of z^4 - z are 0 and the cube roots of unity") {
  const auto rs = roots(ComplexPoly{0.0, -1.0, 0.0, 0.0, 1.0});
  REQUIRE(rs.size() == 4);
  CHECK(has_root(rs, 0.0, 1));
  for (int k = 0; k < 3; ++k) CHECK(has_root(rs, std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0), 1));
}

TEST_CASE("multiple roots are clustered") {
  const auto double_root = roots(ComplexPoly{1.0, -2.0, 1.0});
  REQUIRE(double_root.size() == 1);
  CHECK(has_root(double_root, 1.0, 2));

  const auto triple = roots(from_roots({2.0, 2.0, 2.0, -1.0}));
  CHECK(total_multiplicity(triple) == 4);
  CHECK(has_root(triple, 2.0, 3, 1e-9));
  CHECK(has_root(triple, -1.0, 1, 1e-9));

  const auto zeros = roots(ComplexPoly{0.0, 0.0, 0.0, 1.0, 1.0});
  CHECK(has_root(zeros, 0.0, 3));
  CHECK(has_root(zeros, -1.0, 1));
}

TEST_CASE("close but distinct roots are not merged") {
  const auto rs = roots(from_roots({1.0, 1.0 + 1e-4, Complex(0.0, 1.0)}));
  CHECK(rs.size() == 3);
}

TEST_CASE("random polynomials: multiplicities sum to degree and residuals are small") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int deg : {1, 2, 5, 17, 40, 80}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Complex> c(deg + 1);
      for (auto& x : c) x = {g(rng), g(rng)};
      const ComplexPoly p(c);
      const auto report = find_roots(p);
      REQUIRE(total_multiplicity(report.roots) == deg);
      CHECK(report.max_residual <= 1e-6);
      for (const auto& r : report.roots) {
        const double scale = detail::abs_horner(p.vec(), std::abs(r.value));
        CHECK(std::abs(p(r.value)) / scale <= 1e-12);
      }
    }
  }
}

TEST_CASE("roots are deterministic") {
  const ComplexPoly p{Complex(0.3, -1.0), 2.0, Complex(0.0, 1.5), -1.0, 0.25, 1.0};
  const auto a = roots(p);
  const auto b = roots(p);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("high degree sparse polynomial z^4096 - z") {
  std::vector<Complex> c(4097, 0.0);
  c[1] = -1.0;
  c[4096] = 1.0;
  const auto start = std::chrono::steady_clock::now();
  const auto report = find_roots(ComplexPoly(c));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(total_multiplicity(report.roots) == 4096);
  CHECK(report.roots.size() == 4096);
  for (const auto& r : report.roots) {
    if (std::abs(r.value) > 0.5) REQUIRE(std::abs(std::abs(r.value) - 1.0) < 1e-12);
  }
  MESSAGE("degree 4096 solve: " << secs << " s, " << report.iterations << " iterations");
}

TEST_CASE("extended precision path agrees with double") {
  const ComplexPoly p = from_roots({0.5, Complex(-1.0, 2.0), 3.0, 3.0});
  std::vector<detail::QuadComplex> q;
  for (auto c : p.coefficients()) q.emplace_back(c.real(), c.imag());
  const auto a = find_roots(p);
  const auto b = detail::find_roots_in(q, RootOptions{});
  REQUIRE(a.roots.size() == b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) {
    CHECK(std::abs(a.roots[i].value - b.roots[i].value) < 1e-9);
    CHECK(a.roots[i].multiplicity == b.roots[i].multiplicity);
  }
  CHECK(b.max_residual < 1e-25);
}

TEST_CASE("cauchy radius") {
  std::vector<Complex> c(101, 0.0);
  c[0] = -1.0;
  c[100] = 1.0;
  CHECK(cauchy_radius(ComplexPoly(c)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cauchy_radius(ComplexPoly{-4.0, 0.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("root finding errors") {
  CHECK_THROWS_AS(roots(ComplexPoly{3.0}), Error);
  RootOptions starved;
  starved.max_iterations = 1;
  starved.residual_ceiling = 1e-14;
  std::vector<Complex> c(60);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = Complex(std::cos(double(i) * 1.7), std::sin(double(i * i)));
  try {
    find_roots(ComplexPoly(c), starved);
    FAIL("expected no convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}
