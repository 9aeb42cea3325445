#include "skewcount/rational_map.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "map_kernels.hpp"
#include "skewcount/error.hpp"

namespace skewcount {

namespace {

constexpr double kPoleEps = 64.0 * DBL_EPSILON;

detail::MapCoeffs<Complex> coeffs_of(const RationalMap& R) {
  return {R.numerator().vec(), R.denominator().vec(), R.degree()};
}

/// Value of a polynomial of the given nominal degree scaled by z^-degree for
/// |z| > 1, i.e. the reversed polynomial at w = 1/z, plus its abs-scale.
struct Scaled {
  Complex value;
  double scale;
};

Scaled eval_scaled(const ComplexPoly& p, Complex z, bool reversed) {
  if (!reversed) {
    return {p(z), detail::abs_horner(p.vec(), std::abs(z))};
  }
  const Complex w = 1.0 / z;
  const double rw = std::abs(w);
  Complex acc{};
  double scale = 0.0;
  for (const auto& c : p.coefficients()) {
    acc = acc * w + c;
    scale = scale * rw + std::abs(c);
  }
  return {acc, scale};
}

}  // namespace

SpherePoint SpherePoint::finite(Complex z) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "SpherePoint: coordinate must be finite");
  return SpherePoint(z);
}

Complex SpherePoint::value() const {
  require(z_.has_value(), "SpherePoint: value() called on infinity");
  return *z_;
}

std::strong_ordering operator<=>(const SpherePoint& a, const SpherePoint& b) noexcept {
  if (a.is_infinity() || b.is_infinity()) {
    return a.is_infinity() <=> b.is_infinity();
  }
  const Complex x = *a.z_;
  const Complex y = *b.z_;
  if (x.real() != y.real()) return x.real() < y.real() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (x.imag() != y.imag()) return x.imag() < y.imag() ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string SpherePoint::to_string() const {
  if (is_infinity()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << z_->real() << (z_->imag() < 0 || std::signbit(z_->imag()) ? "" : "+") << z_->imag() << "i";
  return os.str();
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) noexcept {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity() || b.is_infinity()) {
    const Complex z = a.is_infinity() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  const Complex z = a.value();
  const Complex w = b.value();
  return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

RationalMap::RationalMap(ComplexPoly numerator, ComplexPoly denominator, const MapTolerances& tol)
    : p_(std::move(numerator)), q_(std::move(denominator)) {
  if (q_.is_zero()) fail(ErrorKind::InvalidArgument, "RationalMap: denominator is the zero polynomial");
  degree_ = std::max(p_.degree(), q_.degree());
  if (degree_ < 1) {
    fail(ErrorKind::InvalidArgument, "RationalMap: degree must be >= 1 (map is constant)");
  }
  if (p_.degree() >= 1 && q_.degree() >= 1) {
    RootOptions ro;
    ro.cluster_tol = tol.coprime_tol;
    for (const auto& rq : roots(q_, ro)) {
      for (const auto& rp : roots(p_, ro)) {
        const double scale = std::max({1.0, std::abs(rq.value), std::abs(rp.value)});
        if (std::abs(rq.value - rp.value) <= tol.coprime_tol * scale) {
          std::ostringstream msg;
          msg << "RationalMap: P and Q share the root " << rq.value;
          fail(ErrorKind::NotCoprime, msg.str());
        }
      }
    }
  }
}

RationalMap::RationalMap(Trusted, ComplexPoly numerator, ComplexPoly denominator)
    : p_(std::move(numerator)), q_(std::move(denominator)), degree_(std::max(p_.degree(), q_.degree())) {}

SpherePoint RationalMap::operator()(const SpherePoint& p) const { return eval_sphere(*this, p); }

SpherePoint eval_ratio(const ComplexPoly& P, const ComplexPoly& Q, const SpherePoint& p) {
  if (Q.is_zero()) fail(ErrorKind::IndeterminateEvaluation, "eval: zero denominator polynomial");
  if (p.is_infinity()) {
    if (P.degree() > Q.degree()) return SpherePoint::infinity();
    if (P.degree() < Q.degree()) return SpherePoint::finite(0.0);
    return SpherePoint::finite(P.leading() / Q.leading());
  }
  const Complex z = p.value();
  const bool reversed = std::abs(z) > 1.0;
  const Scaled num = eval_scaled(P, z, reversed);
  const Scaled den = eval_scaled(Q, z, reversed);
  const bool num_small = std::abs(num.value) <= kPoleEps * num.scale;
  const bool den_small = std::abs(den.value) <= kPoleEps * den.scale;
  if (den_small) {
    if (num_small || P.is_zero()) {
      std::ostringstream msg;
      msg << "eval: P and Q both vanish at " << z;
      fail(ErrorKind::IndeterminateEvaluation, msg.str());
    }
    return SpherePoint::infinity();
  }
  Complex ratio = num.value / den.value;
  if (reversed) {
    // P(z)/Q(z) = z^(degP - degQ) * P~(1/z)/Q~(1/z)
    const int shift = P.degree() - Q.degree();
    if (shift != 0 && ratio != Complex{}) {
      const double log_mag = std::log(std::abs(ratio)) + shift * std::log(std::abs(z));
      if (log_mag > 700.0) return SpherePoint::infinity();
      ratio *= std::pow(z, shift);
    }
  }
  if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) return SpherePoint::infinity();
  return SpherePoint::finite(ratio);
}

SpherePoint eval_sphere(const RationalMap& R, const SpherePoint& p) {
  return eval_ratio(R.numerator(), R.denominator(), p);
}

RationalMap compose(const RationalMap& outer, const RationalMap& inner, const MapTolerances& tol) {
  auto c = detail::compose_coeffs(coeffs_of(outer), coeffs_of(inner), tol.coefficient_eps);
  return RationalMap(RationalMap::Trusted{}, ComplexPoly(std::move(c.num)), ComplexPoly(std::move(c.den)));
}

MapDerivative derivative(const RationalMap& R) {
  const ComplexPoly& P = R.numerator();
  const ComplexPoly& Q = R.denominator();
  return {P.derivative() * Q - P * Q.derivative(), Q * Q};
}

FixedPointPolynomial fixed_point_polynomial(const RationalMap& R, const MapTolerances& tol) {
  auto fp = detail::fixed_point_coeffs(coeffs_of(R), tol.coefficient_eps);
  return {ComplexPoly(std::move(fp.F)), fp.infinity_multiplicity};
}

}  // namespace skewcount
