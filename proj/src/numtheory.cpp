#include "skewcount/numtheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "skewcount/error.hpp"

namespace skewcount {

void CompensatedSum::add(double term) noexcept {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term)) {
    compensation_ += (sum_ - t) + term;
  } else {
    compensation_ += (term - t) + sum_;
  }
  sum_ = t;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  require(n >= 1, "factorize: n must be >= 1, got " + std::to_string(n));
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int mobius(std::int64_t n) {
  require(n >= 1, "mobius: n must be >= 1, got " + std::to_string(n));
  int sign = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  require(n >= 1, "divisors: n must be >= 1, got " + std::to_string(n));
  std::vector<std::int64_t> low;
  std::vector<std::int64_t> high;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

double harmonic_sum(std::int64_t N) {
  require(N >= 1, "harmonic_sum: N must be >= 1");
  CompensatedSum sum;
  for (std::int64_t n = N; n >= 1; --n) sum.add(1.0 / static_cast<double>(n));
  return sum.value();
}

namespace {

// B_{2j} / (2j)! for j = 1..8
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};

template <class T>
T euler_maclaurin_tail(T s, double a, int corrections) {
  // sum_{n >= a} n^-s with a itself included.
  const T log_a = std::log(a);
  T tail = std::exp((T(1) - s) * log_a) / (s - T(1)) + std::exp(-s * log_a) / T(2);
  T rising = s;  // s (s+1) ... (s+2j-2)
  for (int j = 0; j < corrections; ++j) {
    tail += kBernoulliOverFactorial[j] * rising * std::exp(-(s + T(2 * j + 1)) * log_a);
    rising *= (s + T(2 * j + 1)) * (s + T(2 * j + 2));
  }
  return tail;
}

double midpoint_remainder_bound(std::complex<double> s, std::int64_t N) {
  const double sigma = s.real();
  const double x = static_cast<double>(N) + 0.5;
  const double scale = std::abs(s * (s + 1.0)) / 24.0;
  return scale * (std::pow(x, -sigma - 2.0) + std::pow(x, -sigma - 1.0) / (sigma + 1.0));
}

double euler_maclaurin_bound(std::complex<double> s, std::int64_t N, int corrections) {
  // First omitted correction term times |s + 2K + 1| / (sigma + 2K + 1).
  std::complex<double> rising = s;
  for (int j = 0; j < 2 * corrections; ++j) rising *= s + static_cast<double>(j + 1);
  const int k = 2 * corrections + 2;
  const double b = 43867.0 / 798.0;  // B_18
  double factorial = 1.0;
  for (int i = 2; i <= k; ++i) factorial *= i;
  const double sigma = s.real();
  return std::abs(rising) * (b / factorial) * std::pow(static_cast<double>(N), -sigma - k + 1) *
         std::abs(s + static_cast<double>(k - 1)) / (sigma + k - 1);
}

}  // namespace

ZetaResult zeta(std::complex<double> s, double tol, const ZetaOptions& options) {
  require(tol > 0.0, "zeta: tol must be positive");
  if (!(s.real() > 1.0 + options.margin)) {
    fail(ErrorKind::OutsideConvergenceRegion,
         "zeta: Re(s) = " + std::to_string(s.real()) + " is not above 1 + " +
             std::to_string(options.margin));
  }
  constexpr int kCorrections = 8;
  auto bound_at = [&](std::int64_t N) {
    return options.euler_maclaurin ? euler_maclaurin_bound(s, N, kCorrections)
                                   : midpoint_remainder_bound(s, N);
  };

  std::int64_t hi = 1;
  while (bound_at(hi) > tol) {
    if (hi >= options.term_cap) {
      fail(ErrorKind::ToleranceUnreachable,
           "zeta: tolerance " + std::to_string(tol) + " needs more than " +
               std::to_string(options.term_cap) + " terms");
    }
    hi = std::min(hi * 2, options.term_cap);
  }
  std::int64_t lo = hi / 2;
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (bound_at(mid) > tol ? lo : hi) = mid;
  }
  const std::int64_t N = hi;

  CompensatedComplexSum sum;
  if (options.euler_maclaurin) {
    for (std::int64_t n = N - 1; n >= 1; --n) sum.add(std::exp(-s * std::log(static_cast<double>(n))));
    sum.add(euler_maclaurin_tail(s, static_cast<double>(N), kCorrections));
  } else {
    for (std::int64_t n = N; n >= 1; --n) sum.add(std::exp(-s * std::log(static_cast<double>(n))));
    sum.add(std::exp((1.0 - s) * std::log(static_cast<double>(N) + 0.5)) / (s - 1.0));
  }
  return {sum.value(), N, bound_at(N)};
}

double zeta_tail(double s, std::int64_t a) {
  require(s > 1.0, "zeta_tail: s must exceed 1");
  require(a >= 1, "zeta_tail: start index must be >= 1");
  constexpr std::int64_t kShift = 20;
  CompensatedSum sum;
  const std::int64_t start = std::max(a, kShift);
  sum.add(euler_maclaurin_tail(s, static_cast<double>(start), 8));
  for (std::int64_t n = start - 1; n >= a; --n) sum.add(std::pow(static_cast<double>(n), -s));
  return sum.value();
}

}  // namespace skewcount
