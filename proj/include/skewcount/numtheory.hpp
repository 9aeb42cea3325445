#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace skewcount {

/// Euler-Mascheroni constant to 20 significant digits.
inline constexpr long double kEulerGamma = 0.57721566490153286061L;

/// Neumaier's variant of Kahan summation. Order-sensitive like any float
/// reduction, so callers feed terms in a fixed order.
class CompensatedSum {
 public:
  void add(double term) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> term) noexcept {
    re_.add(term.real());
    im_.add(term.imag());
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Moebius function by trial division. Throws InvalidArgument for n < 1.
int mobius(std::int64_t n);

/// Divisors of n in ascending order.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Prime factorisation as (prime, exponent) pairs, ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// Sum of 1/n for n = 1..N, compensated.
double harmonic_sum(std::int64_t N);

struct ZetaOptions {
  double margin = 0.05;
  std::int64_t term_cap = 10'000'000;
  /// Euler-Maclaurin tail instead of the plain integral comparison.
  bool euler_maclaurin = false;
};

struct ZetaResult {
  std::complex<double> value;
  std::int64_t terms = 0;     ///< truncation index N of the partial sum
  double error_bound = 0.0;   ///< certified bound on |value - zeta(s)| (excl. rounding)
};

/// Riemann zeta on Re(s) > 1 + margin.
///
/// Partial sum to N plus the integral of x^-s over [N + 1/2, inf). The
/// midpoint-rule remainder is bounded by |s(s+1)| / (24 (sigma+1)) (N+1/2)^-(sigma+1)
/// and N grows until that bound is below tol.
ZetaResult zeta(std::complex<double> s, double tol, const ZetaOptions& options = {});

/// Tail of the Hurwitz zeta function: sum_{n >= a} n^-s for real s > 1 and
/// integer a >= 1. Euler-Maclaurin with 8 Bernoulli corrections after moving
/// the start point to at least 20; accurate to ~1e-15 relative.
double zeta_tail(double s, std::int64_t a);

}  // namespace skewcount
