#pragma once

// Coefficient-vector kernels shared by the double and quad precision paths.
// Vectors hold coefficients in ascending degree order; an empty vector is the
// zero polynomial.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace skewcount::detail {

using QuadReal = boost::multiprecision::cpp_bin_float_quad;
using QuadComplex = boost::multiprecision::cpp_complex_quad;

template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<std::complex<double>> {
  using Real = double;
  static double to_double(double x) { return x; }
  static std::complex<double> from(std::complex<double> z) { return z; }
  static std::complex<double> to_complex_double(std::complex<double> z) { return z; }
};

template <>
struct ScalarTraits<QuadComplex> {
  using Real = QuadReal;
  static double to_double(const QuadReal& x) { return static_cast<double>(x); }
  static QuadComplex from(std::complex<double> z) { return QuadComplex(z.real(), z.imag()); }
  static std::complex<double> to_complex_double(const QuadComplex& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
  }
};

template <class C>
auto magnitude(const C& z) {
  using std::abs;
  return abs(z);
}

template <class C>
void trim_exact_zeros(std::vector<C>& coeffs) {
  while (!coeffs.empty() && coeffs.back() == C(0)) coeffs.pop_back();
}

template <class C>
std::vector<C> poly_add(const std::vector<C>& a, const std::vector<C>& b) {
  std::vector<C> out(std::max(a.size(), b.size()), C(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

template <class C>
std::vector<C> poly_mul(const std::vector<C>& a, const std::vector<C>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<C> out(a.size() + b.size() - 1, C(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == C(0)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <class C>
std::vector<C> poly_scale(std::vector<C> a, const C& s) {
  for (auto& c : a) c *= s;
  return a;
}

template <class C>
std::vector<C> poly_derivative(const std::vector<C>& a) {
  if (a.size() <= 1) return {};
  std::vector<C> out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * C(static_cast<double>(i));
  return out;
}

/// Coefficient i of the input, zero beyond its length.
template <class C>
C coeff(const std::vector<C>& a, std::size_t i) {
  return i < a.size() ? a[i] : C(0);
}

template <class C>
C horner(const std::vector<C>& a, const C& z) {
  C acc(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// sum |a_i| |z|^i, the scale used for backward-error residuals.
template <class C>
auto abs_horner(const std::vector<C>& a, const typename ScalarTraits<C>::Real& r) {
  using Real = typename ScalarTraits<C>::Real;
  Real acc(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * r + magnitude(*it);
  return acc;
}

/// Evaluation that stays finite for |z| > 1 on high degree polynomials.
///
/// Returns F(z) / F'(z) together with the relative residual
/// |F(z)| / sum |a_i||z|^i. Outside the unit disc it evaluates the reversed
/// polynomial G(w) = w^n F(1/w), so both quantities are computed without
/// forming z^n.
template <class C>
struct NewtonStep {
  C ratio;
  typename ScalarTraits<C>::Real relative_residual;
  bool derivative_vanishes = false;
};

template <class C>
NewtonStep<C> newton_step(const std::vector<C>& a, const C& z) {
  using Real = typename ScalarTraits<C>::Real;
  const std::size_t n = a.size() - 1;
  const Real r = magnitude(z);
  NewtonStep<C> out{C(0), Real(0)};
  if (r <= Real(1)) {
    C p = a[n];
    C dp(0);
    for (std::size_t k = n; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + a[k];
    }
    const Real scale = abs_horner(a, r);
    out.relative_residual = scale > Real(0) ? Real(magnitude(p) / scale) : Real(0);
    if (dp == C(0)) {
      out.derivative_vanishes = true;
      return out;
    }
    out.ratio = p / dp;
    return out;
  }
  const C w = C(1) / z;
  C g = a[0];
  C dg(0);
  Real scale = magnitude(a[0]);
  const Real rw = Real(1) / r;
  for (std::size_t k = 1; k <= n; ++k) {
    dg = dg * w + g;
    g = g * w + a[k];
    scale = scale * rw + magnitude(a[k]);
  }
  out.relative_residual = scale > Real(0) ? Real(magnitude(g) / scale) : Real(0);
  const C denom = C(static_cast<double>(n)) * g - w * dg;
  if (denom == C(0)) {
    out.derivative_vanishes = true;
    return out;
  }
  out.ratio = z * g / denom;
  return out;
}

template <class C>
typename ScalarTraits<C>::Real relative_residual(const std::vector<C>& a, const C& z) {
  return newton_step(a, z).relative_residual;
}

/// Homogeneous composition: sum_k p_k A^k B^(d-k) for a coefficient list p of
/// nominal degree d (entries beyond p.size() are zero).
template <class C>
std::vector<C> homogeneous_compose(const std::vector<C>& p, std::size_t d,
                                   const std::vector<std::vector<C>>& a_powers,
                                   const std::vector<std::vector<C>>& b_powers) {
  std::vector<C> out;
  for (std::size_t k = 0; k < p.size() && k <= d; ++k) {
    if (p[k] == C(0)) continue;
    out = poly_add(out, poly_scale(poly_mul(a_powers[k], b_powers[d - k]), p[k]));
  }
  return out;
}

template <class C>
std::vector<std::vector<C>> powers(const std::vector<C>& a, std::size_t up_to) {
  std::vector<std::vector<C>> out;
  out.reserve(up_to + 1);
  out.push_back({C(1)});
  for (std::size_t k = 1; k <= up_to; ++k) out.push_back(poly_mul(out.back(), a));
  return out;
}

}  // namespace skewcount::detail
