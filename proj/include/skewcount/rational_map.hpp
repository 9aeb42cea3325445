#pragma once

#include <compare>
#include <optional>
#include <string>

#include "skewcount/polynomial.hpp"

namespace skewcount {

/// A point of the Riemann sphere: a finite complex number or infinity.
class SpherePoint {
 public:
  static SpherePoint infinity() noexcept { return SpherePoint(); }
  /// Throws InvalidArgument for non-finite input.
  static SpherePoint finite(Complex z);

  bool is_infinity() const noexcept { return !z_.has_value(); }
  bool is_finite() const noexcept { return z_.has_value(); }
  /// The finite coordinate. Throws InvalidArgument at infinity.
  Complex value() const;

  /// Lexicographic on (Re, Im) with infinity last.
  friend std::strong_ordering operator<=>(const SpherePoint& a, const SpherePoint& b) noexcept;
  friend bool operator==(const SpherePoint& a, const SpherePoint& b) noexcept {
    return (a <=> b) == std::strong_ordering::equal;
  }

  std::string to_string() const;

 private:
  SpherePoint() = default;
  explicit SpherePoint(Complex z) : z_(z) {}
  std::optional<Complex> z_;
};

/// Chordal distance 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), in [0, 2].
double chordal_distance(const SpherePoint& a, const SpherePoint& b) noexcept;

struct MapTolerances {
  /// Relative cancellation below which a leading coefficient counts as zero.
  double coefficient_eps = 1e-12;
  /// Roots of P and Q closer than this (relative) reject the map.
  double coprime_tol = 1e-8;
};

/// R = P / Q acting on the Riemann sphere, with degree max(deg P, deg Q).
class RationalMap {
 public:
  /// Validates Q != 0, degree >= 1 and numerical coprimality of P and Q.
  RationalMap(ComplexPoly numerator, ComplexPoly denominator, const MapTolerances& tol = {});

  static RationalMap polynomial(ComplexPoly p) { return RationalMap(std::move(p), ComplexPoly{1.0}); }

  const ComplexPoly& numerator() const noexcept { return p_; }
  const ComplexPoly& denominator() const noexcept { return q_; }
  int degree() const noexcept { return degree_; }

  SpherePoint operator()(const SpherePoint& p) const;

  friend RationalMap compose(const RationalMap& outer, const RationalMap& inner, const MapTolerances& tol);
  friend bool operator==(const RationalMap&, const RationalMap&) = default;

 private:
  struct Trusted {};
  RationalMap(Trusted, ComplexPoly numerator, ComplexPoly denominator);

  ComplexPoly p_;
  ComplexPoly q_;
  int degree_ = 0;
};

/// R(p) with chart handling at infinity and at poles. Throws
/// IndeterminateEvaluation if P and Q vanish together.
SpherePoint eval_sphere(const RationalMap& R, const SpherePoint& p);

/// P(z)/Q(z) on the sphere for an arbitrary polynomial pair; the evaluation
/// contract of eval_sphere without the map invariants.
SpherePoint eval_ratio(const ComplexPoly& P, const ComplexPoly& Q, const SpherePoint& p);

/// outer o inner, of degree deg(outer) * deg(inner), jointly renormalised so
/// the largest coefficient magnitude is 1. Throws DegenerateComposition when
/// the leading coefficients cancel to below coefficient_eps.
RationalMap compose(const RationalMap& outer, const RationalMap& inner, const MapTolerances& tol = {});

/// Unreduced derivative (P'Q - PQ') / Q^2.
struct MapDerivative {
  ComplexPoly numerator;
  ComplexPoly denominator;

  SpherePoint operator()(const SpherePoint& p) const { return eval_ratio(numerator, denominator, p); }
};

MapDerivative derivative(const RationalMap& R);

struct FixedPointPolynomial {
  ComplexPoly F;            ///< P(z) - z Q(z)
  int infinity_multiplicity = 0;  ///< (d + 1) - deg F
};

/// Throws TotalDegeneration when F vanishes identically (R is the identity).
FixedPointPolynomial fixed_point_polynomial(const RationalMap& R, const MapTolerances& tol = {});

}  // namespace skewcount
