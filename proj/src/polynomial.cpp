#include "skewcount/polynomial.hpp"

#include <algorithm>

#include "poly_kernels.hpp"

namespace skewcount {

ComplexPoly::ComplexPoly(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  detail::trim_exact_zeros(coeffs_);
}

ComplexPoly ComplexPoly::monomial(int degree, Complex coefficient) {
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1, Complex{});
  c.back() = coefficient;
  return ComplexPoly(std::move(c));
}

Complex ComplexPoly::operator()(Complex z) const noexcept { return detail::horner(coeffs_, z); }

ComplexPoly ComplexPoly::derivative() const { return ComplexPoly(detail::poly_derivative(coeffs_)); }

double ComplexPoly::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
  return ComplexPoly(detail::poly_add(a.coeffs_, b.coeffs_));
}

ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
  return a + Complex(-1.0) * b;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  return ComplexPoly(detail::poly_mul(a.coeffs_, b.coeffs_));
}

ComplexPoly operator*(Complex s, const ComplexPoly& a) {
  return ComplexPoly(detail::poly_scale(a.coeffs_, s));
}

}  // namespace skewcount
