#pragma once

#include <string>
#include <vector>

#include "poly_kernels.hpp"
#include "skewcount/error.hpp"

namespace skewcount::detail {

template <class C>
struct MapCoeffs {
  std::vector<C> num;
  std::vector<C> den;
  int degree = 0;
};

/// outer o inner on raw coefficients; see compose() for the contract.
template <class C>
MapCoeffs<C> compose_coeffs(const MapCoeffs<C>& outer, const MapCoeffs<C>& inner, double coefficient_eps) {
  using Real = typename ScalarTraits<C>::Real;
  const auto d_outer = static_cast<std::size_t>(outer.degree);
  const auto d_inner = static_cast<std::size_t>(inner.degree);
  const std::size_t D = d_outer * d_inner;
  const auto p_pow = powers(inner.num, d_outer);
  const auto q_pow = powers(inner.den, d_outer);
  MapCoeffs<C> out;
  out.num = homogeneous_compose(outer.num, d_outer, p_pow, q_pow);
  out.den = homogeneous_compose(outer.den, d_outer, p_pow, q_pow);
  out.num.resize(std::max(out.num.size(), D + 1), C(0));
  out.den.resize(std::max(out.den.size(), D + 1), C(0));

  // The degree-D coefficients equal the homogenised outer polynomials at the
  // inner leading pair (a, b); compare against the cancellation-free scale.
  const C a = coeff(inner.num, d_inner);
  const C b = coeff(inner.den, d_inner);
  auto lead_scale = [&](const std::vector<C>& p) {
    Real s(0);
    const Real ma = magnitude(a);
    const Real mb = magnitude(b);
    for (std::size_t k = 0; k < p.size() && k <= d_outer; ++k) {
      Real t = magnitude(p[k]);
      for (std::size_t i = 0; i < k; ++i) t *= ma;
      for (std::size_t i = k; i < d_outer; ++i) t *= mb;
      s += t;
    }
    return s;
  };
  auto relative_lead = [&](std::vector<C>& p, const std::vector<C>& outer_p) {
    const Real scale = lead_scale(outer_p);
    if (scale == Real(0)) {
      p[D] = C(0);
      return 0.0;
    }
    const double rel = ScalarTraits<C>::to_double(magnitude(p[D]) / scale);
    if (rel < coefficient_eps) p[D] = C(0);
    return rel;
  };
  const double rel_num = relative_lead(out.num, outer.num);
  const double rel_den = relative_lead(out.den, outer.den);
  if (std::max(rel_num, rel_den) < coefficient_eps) {
    fail(ErrorKind::DegenerateComposition,
         "compose: leading coefficients cancel (relative " + std::to_string(std::max(rel_num, rel_den)) +
             "), degree " + std::to_string(D) + " would drop");
  }

  Real biggest(0);
  for (const auto& c : out.num) biggest = std::max(biggest, Real(magnitude(c)));
  for (const auto& c : out.den) biggest = std::max(biggest, Real(magnitude(c)));
  const C inv = C(Real(1) / biggest);
  for (auto& c : out.num) c *= inv;
  for (auto& c : out.den) c *= inv;
  trim_exact_zeros(out.num);
  trim_exact_zeros(out.den);
  out.degree = static_cast<int>(D);
  return out;
}

template <class C>
struct FixedPointCoeffs {
  std::vector<C> F;
  int infinity_multiplicity = 0;
};

template <class C>
FixedPointCoeffs<C> fixed_point_coeffs(const MapCoeffs<C>& map, double coefficient_eps) {
  using Real = typename ScalarTraits<C>::Real;
  const std::size_t top = static_cast<std::size_t>(map.degree) + 1;
  std::vector<C> F(top + 1, C(0));
  std::vector<Real> scale(top + 1, Real(0));
  for (std::size_t k = 0; k <= top; ++k) {
    const C p = coeff(map.num, k);
    const C q = k > 0 ? coeff(map.den, k - 1) : C(0);
    F[k] = p - q;
    scale[k] = std::max(Real(magnitude(p)), Real(magnitude(q)));
  }
  // Drop leading coefficients that are pure cancellation noise.
  while (!F.empty() &&
         (F.back() == C(0) || magnitude(F.back()) <= Real(coefficient_eps) * scale[F.size() - 1])) {
    F.pop_back();
  }
  if (F.empty()) fail(ErrorKind::TotalDegeneration, "fixed_point_polynomial: P - zQ vanishes identically");
  FixedPointCoeffs<C> out;
  out.infinity_multiplicity = static_cast<int>(top) - (static_cast<int>(F.size()) - 1);
  out.F = std::move(F);
  return out;
}

}  // namespace skewcount::detail
