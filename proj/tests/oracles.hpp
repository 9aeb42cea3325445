#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;

/// Moebius via a smallest-prime-factor sieve.
inline std::vector<int> mobius_table(int n_max) {
  std::vector<int> spf(n_max + 1, 0);
  for (int i = 2; i <= n_max; ++i) {
    if (spf[i] != 0) continue;
    for (int j = i; j <= n_max; j += i)
      if (spf[j] == 0) spf[j] = i;
  }
  std::vector<int> mu(n_max + 1, 0);
  if (n_max >= 1) mu[1] = 1;
  for (int n = 2; n <= n_max; ++n) {
    const int p = spf[n];
    const int m = n / p;
    mu[n] = (m % p == 0) ? 0 : -mu[m];
  }
  return mu;
}

/// Sum of n^-s for n <= N plus the two-sided integral bracket on the tail:
/// (N+1)^(1-s)/(s-1) <= tail <= N^(1-s)/(s-1). Returns the bracket midpoint and
/// half-width.
struct Bracket {
  long double mid;
  long double half_width;
};

inline Bracket zeta_bracket(double s, std::int64_t N) {
  long double partial = 0.0L;
  for (std::int64_t n = N; n >= 1; --n) partial += std::pow(static_cast<long double>(n), -static_cast<long double>(s));
  const long double lo = std::pow(static_cast<long double>(N + 1), 1.0L - s) / (s - 1.0L);
  const long double hi = std::pow(static_cast<long double>(N), 1.0L - s) / (s - 1.0L);
  return {partial + 0.5L * (lo + hi), 0.5L * (hi - lo)};
}

inline long double harmonic_naive(std::int64_t N) {
  long double h = 0.0L;
  for (std::int64_t n = 1; n <= N; ++n) h += 1.0L / n;
  return h;
}

/// Number of fixed points of a degree-D rational map iterated m times,
/// counted with multiplicity, restricted to exact period m: sum over e | m of
/// mu(m/e) (D^e + 1), evaluated by brute-force divisor enumeration.
inline BigInt exact_period_points(const BigInt& D, int m) {
  BigInt total = 0;
  const auto mu = mobius_table(m);
  for (int e = 1; e <= m; ++e) {
    if (m % e != 0) continue;
    const int sign = mu[m / e];
    if (sign == 0) continue;
    BigInt term = boost::multiprecision::pow(D, e) + 1;
    total += sign > 0 ? term : BigInt(-term);
  }
  return total;
}

/// E_S(0, n) = (sum r_j)^n + M^n.
inline BigInt periodic_count_formula(const std::vector<int>& degrees, int n) {
  BigInt sum_r = 0;
  for (int r : degrees) sum_r += r;
  return boost::multiprecision::pow(sum_r, n) + boost::multiprecision::pow(BigInt(degrees.size()), n);
}

/// Closed orbit counts C(n) = (1/n) sum_{d|n} mu(n/d) E(d) from the formula.
inline std::vector<BigInt> orbit_counts_formula(const std::vector<int>& degrees, int n_max) {
  const auto mu = mobius_table(n_max);
  std::vector<BigInt> C(n_max + 1, 0);
  for (int n = 1; n <= n_max; ++n) {
    BigInt acc = 0;
    for (int d = 1; d <= n; ++d) {
      if (n % d != 0 || mu[n / d] == 0) continue;
      const BigInt e = periodic_count_formula(degrees, d);
      acc += mu[n / d] > 0 ? e : BigInt(-e);
    }
    C[n] = acc / n;
  }
  return C;
}

/// C(n) / lambda^n for f = 0 straight from the Moebius sum of the closed
/// formula, in long double; lambda = sum r_j.
inline long double scaled_orbit_count(const std::vector<int>& degrees, int n) {
  long double lambda = 0.0L;
  for (int r : degrees) lambda += r;
  const long double M = degrees.size();
  const auto mu = mobius_table(n);
  long double acc = 0.0L;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0 || mu[n / d] == 0) continue;
    acc += mu[n / d] * (std::pow(lambda, static_cast<long double>(d - n)) + std::pow(M / lambda, static_cast<long double>(d)) *
                                                                                  std::pow(lambda, static_cast<long double>(d - n)));
  }
  return acc / n;
}

/// Sum over n >= 1 of C(n) / (n^k lambda^n) for f = 0 with lambda = sum r_j.
/// Terms are exact to n = 64; beyond that C(n)/lambda^n = 1/n to long double
/// precision when M <= lambda/2. Summed to N with the integral bracket on the
/// remaining sum of n^-(k+1).
inline Bracket meissel_bracket(const std::vector<int>& degrees, long double k, std::int64_t N) {
  long double head = 0.0L;
  for (int n = 1; n <= 64; ++n) head += scaled_orbit_count(degrees, n) / std::pow(static_cast<long double>(n), k);
  long double body = 0.0L;
  for (std::int64_t n = N; n > 64; --n) body += std::pow(static_cast<long double>(n), -k - 1.0L);
  const long double lo = std::pow(static_cast<long double>(N + 1), -k) / k;
  const long double hi = std::pow(static_cast<long double>(N), -k) / k;
  return {head + body + 0.5L * (lo + hi), 0.5L * (hi - lo)};
}

/// Expand a polynomial composition symbolically over complex<long double>:
/// coefficients of outer(inner(z)) for polynomial outer/inner.
inline std::vector<std::complex<long double>> poly_compose(const std::vector<std::complex<long double>>& outer,
                                                           const std::vector<std::complex<long double>>& inner) {
  std::vector<std::complex<long double>> result{outer.back()};
  for (std::size_t k = outer.size() - 1; k-- > 0;) {
    std::vector<std::complex<long double>> next(result.size() + inner.size() - 1);
    for (std::size_t i = 0; i < result.size(); ++i)
      for (std::size_t j = 0; j < inner.size(); ++j) next[i + j] += result[i] * inner[j];
    next[0] += outer[k];
    result = next;
  }
  return result;
}

}  // namespace oracle
