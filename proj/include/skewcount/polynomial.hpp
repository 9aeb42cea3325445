#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace skewcount {

using Complex = std::complex<double>;

/// Polynomial with complex coefficients in ascending degree order.
///
/// Exact zero leading coefficients are trimmed on construction, so a nonzero
/// polynomial always has a nonzero leading coefficient. The zero polynomial
/// has no coefficients and degree -1.
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<Complex> coefficients);
  ComplexPoly(std::initializer_list<Complex> coefficients)
      : ComplexPoly(std::vector<Complex>(coefficients)) {}

  static ComplexPoly monomial(int degree, Complex coefficient = 1.0);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  const std::vector<Complex>& vec() const noexcept { return coeffs_; }

  /// Coefficient of z^i; zero past the degree.
  Complex operator[](std::size_t i) const noexcept {
    return i < coeffs_.size() ? coeffs_[i] : Complex{};
  }
  Complex leading() const noexcept { return coeffs_.empty() ? Complex{} : coeffs_.back(); }

  Complex operator()(Complex z) const noexcept;
  ComplexPoly derivative() const;
  double max_abs() const noexcept;

  friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(Complex s, const ComplexPoly& a);

  friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;

 private:
  std::vector<Complex> coeffs_;
};

struct RootOptions {
  /// Roots closer than cluster_tol * max(1, |root|) are reported once.
  double cluster_tol = 1e-8;
  /// Ceiling on max |F(root)| / sum |a_i||root|^i after iteration.
  double residual_ceiling = 1e-6;
  int max_iterations = 500;
  /// Neighbourhood in which near-coincident approximations are tested as a
  /// multiple root (Newton on the (k-1)-th derivative).
  double multiple_root_radius = 5e-4;
  std::uint64_t seed = 0x5EEDC0FFEEULL;
};

struct Root {
  Complex value;
  int multiplicity = 1;
};

struct RootReport {
  std::vector<Root> roots;  ///< sorted by (real, imag)
  int iterations = 0;
  double max_residual = 0.0;
};

/// All roots of F with multiplicities summing to deg F.
///
/// Aberth-Ehrlich simultaneous iteration from a perturbed circle whose radius
/// is the positive root of the Cauchy polynomial, then Newton polishing and
/// multiplicity clustering. Exact zero low-order coefficients are peeled off
/// as a root at 0 before iterating. Throws NoConvergence when the polished
/// relative residual exceeds residual_ceiling.
RootReport find_roots(const ComplexPoly& F, const RootOptions& options = {});

inline std::vector<Root> roots(const ComplexPoly& F, const RootOptions& options = {}) {
  return find_roots(F, options).roots;
}

/// Radius of the Cauchy bound circle: the positive root of
/// |a_n| x^n - sum_{i<n} |a_i| x^i.
double cauchy_radius(const ComplexPoly& F);

}  // namespace skewcount
