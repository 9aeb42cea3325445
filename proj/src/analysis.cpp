#include "skewcount/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skewcount/error.hpp"
#include "skewcount/numtheory.hpp"

namespace skewcount {
namespace {

constexpr std::size_t kMinWindow = 5;

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Fills kappa1, kappa2 and the verdict from already computed points.
void settle(ComparabilityReport& r) {
  if (r.points.size() < kMinWindow) {
    fail(ErrorKind::WindowTooShort, r.claim + ": window has " + std::to_string(r.points.size()) +
                                        " points, need at least " + std::to_string(kMinWindow));
  }
  r.kappa1 = r.points.front().ratio;
  r.kappa2 = r.points.front().ratio;
  bool finite = true;
  for (const auto& p : r.points) {
    r.kappa1 = std::min(r.kappa1, p.ratio);
    r.kappa2 = std::max(r.kappa2, p.ratio);
    finite = finite && std::isfinite(p.ratio);
  }
  if (!finite) {
    r.band_ratio = std::numeric_limits<double>::infinity();
    r.failure = "non-finite ratio in the window";
  } else if (!(r.kappa1 > 0.0)) {
    r.band_ratio = std::numeric_limits<double>::infinity();
    r.failure = "ratios not strictly positive (min " + fmt(r.kappa1) + ")";
  } else {
    r.band_ratio = r.kappa2 / r.kappa1;
    if (r.band_ratio > r.ceiling) r.failure = "band ratio " + fmt(r.band_ratio) + " exceeds ceiling " + fmt(r.ceiling);
  }
  r.pass = r.failure.empty();
}

void check_comparator(const std::string& claim, double x, double B) {
  if (!(B > 0.0)) {
    fail(ErrorKind::NonpositiveComparator, claim + ": comparator is " + fmt(B) + " at " + fmt(x));
  }
}

void check_lambda(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    fail(ErrorKind::LambdaNotPositive, "lambda must exceed 1, got " + fmt(lambda));
  }
}

int first_index(const BandOptions& options) { return std::max(1, static_cast<int>(std::ceil(options.burn_in))); }

void check_end(const CountTable& table, int N_max) {
  require(N_max >= 1 && N_max <= table.n_max(),
          "sweep end " + std::to_string(N_max) + " outside table range 1.." + std::to_string(table.n_max()));
}

}  // namespace

ComparabilityReport ratio_band(const std::string& claim, const std::vector<double>& x, const std::vector<double>& A,
                               const std::vector<double>& B, const BandOptions& options) {
  require(x.size() == A.size() && A.size() == B.size(), "ratio_band: sequences differ in length");
  ComparabilityReport r;
  r.claim = claim;
  r.statement = "A ~ B";
  r.burn_in = options.burn_in;
  r.ceiling = options.ceiling;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < options.burn_in) continue;
    check_comparator(claim, x[i], B[i]);
    r.points.push_back({x[i], A[i], B[i], A[i] / B[i]});
  }
  settle(r);
  return r;
}

ComparabilityReport verify_theorem_1(const CountTable& table, double lambda, int N_max, const BandOptions& options) {
  check_lambda(lambda);
  check_end(table, N_max);
  ComparabilityReport r;
  r.claim = "thm1";
  r.statement = "pi_S(f,N) ~ lambda^N / N";
  r.burn_in = options.burn_in;
  r.ceiling = options.ceiling;
  // s = pi_S(N) / lambda^N, updated without forming lambda^N
  double s = 0.0;
  const int lo = first_index(options);
  for (int N = 1; N <= N_max; ++N) {
    s = s / lambda + table.C_over_power(N, lambda);
    if (N < lo) continue;
    const double B = std::exp(N * std::log(lambda)) / N;
    r.points.push_back({double(N), pi_S(table, N), B, N * s});
  }
  r.context = {{"lambda", lambda}, {"limit lambda/(lambda-1)", lambda / (lambda - 1.0)}};
  settle(r);
  return r;
}

ComparabilityReport verify_theorem_2(const CountTable& table, double lambda, int N_max, const BandOptions& options) {
  check_lambda(lambda);
  check_end(table, N_max);
  ComparabilityReport r;
  r.claim = "thm2";
  r.statement = "sum_{n<=N} C(n)/lambda^n ~ log N";
  r.burn_in = options.burn_in;
  r.ceiling = options.ceiling;
  CompensatedSum s;
  const int lo = first_index(options);
  for (int N = 1; N <= N_max; ++N) {
    s.add(table.C_over_power(N, lambda));
    if (N < lo) continue;
    const double B = std::log(double(N));
    check_comparator(r.claim, N, B);
    r.points.push_back({double(N), s.value(), B, s.value() / B});
  }
  r.context = {{"lambda", lambda}};
  settle(r);
  return r;
}

ComparabilityReport verify_theorem_3(const CountTable& table, double lambda, const std::vector<double>& k_grid,
                                     const BandOptions& options, double tail_tol) {
  check_lambda(lambda);
  ComparabilityReport r;
  r.claim = "thm3";
  r.statement = "sum_n C(n)/(n^k lambda^n) ~ 1/k";
  r.x_label = "k";
  r.burn_in = 0.0;
  r.ceiling = options.ceiling;
  double worst_tail = 0.0;
  int most_terms = 0;
  for (double k : k_grid) {
    require(k > 0.0, "theorem 3 needs k > 0, got " + fmt(k));
    const auto v = meissel_sum(table, lambda, k, tail_tol);
    worst_tail = std::max(worst_tail, v.truncation->tail_bound);
    most_terms = std::max(most_terms, v.truncation->terms);
    r.points.push_back({k, v.value.real(), 1.0 / k, k * v.value.real()});
  }
  r.context = {{"lambda", lambda}, {"max tail bound", worst_tail}, {"max terms", double(most_terms)}};
  settle(r);
  return r;
}

bool Theorem4Report::pass() const {
  if (!convolution_holds) return false;
  return std::all_of(per_z.begin(), per_z.end(), [](const auto& e) { return e.second.pass; });
}

Theorem4Report verify_theorem_4(const CountTable& table, double lambda, const std::vector<std::complex<double>>& z_grid,
                                int N, const BandOptions& options) {
  check_lambda(lambda);
  check_end(table, N);
  Theorem4Report out;
  const int failure = convolution_failure(table, N);
  out.convolution_checked_to = N;
  out.convolution_holds = failure == 0;
  for (const auto& z : z_grid) {
    ComparabilityReport r;
    r.claim = "thm4";
    r.statement = "sum_{n<=N} C(n)/n^z ~ (1/zeta(z)) sum_{n<=N} lambda^n/n^(z+1)";
    r.burn_in = options.burn_in;
    r.ceiling = options.ceiling;
    double zeta_error = 0.0;
    for (int M = first_index(options); M <= N; ++M) {
      const auto d = dirichlet_partial(table, lambda, z, M);
      zeta_error = std::max(zeta_error, d.zeta_error_bound);
      const double B = std::abs(d.rhs_scaled);
      check_comparator(r.claim, M, B);
      r.points.push_back({double(M), std::abs(d.lhs_scaled), B, d.ratio()});
    }
    r.context = {{"lambda", lambda}, {"Re z", z.real()}, {"Im z", z.imag()}, {"zeta error bound", zeta_error}};
    r.notes.push_back("matched truncation at N of both divergent series; both sides scaled by lambda^-N");
    r.notes.push_back("ratio is the modulus |lhs / rhs|");
    if (!out.convolution_holds) r.notes.push_back("convolution identity fails at n = " + std::to_string(failure));
    settle(r);
    out.per_z.emplace_back(z, std::move(r));
  }
  return out;
}

ComparabilityReport verify_rho(const CountTable& table, double lambda, double lambda_hat,
                               const std::vector<double>& z_grid, const BandOptions& options) {
  check_lambda(lambda);
  ComparabilityReport r;
  r.claim = "rho";
  r.statement = "rho_f(z) ~ log(1/(1 - z lambda))";
  r.x_label = "z";
  r.burn_in = 0.0;
  r.ceiling = options.ceiling;
  double worst_tail = 0.0;
  for (double z : z_grid) {
    if (!(z * lambda < 1.0)) {
      fail(ErrorKind::OutsideRadius, "rho: z = " + fmt(z) + " is not inside 1/lambda = " + fmt(1.0 / lambda));
    }
    const auto v = rho_series(table, z, lambda_hat);
    worst_tail = std::max(worst_tail, v.truncation->tail_bound);
    const double B = -std::log1p(-z * lambda);
    check_comparator(r.claim, z, B);
    r.points.push_back({z, v.value.real(), B, v.value.real() / B});
  }
  r.context = {{"lambda", lambda}, {"lambda_hat", lambda_hat}, {"max tail bound", worst_tail}};
  settle(r);
  return r;
}

std::vector<ComparabilityReport> verify_corollary(const CountTable& table, double lambda,
                                                  const CorollaryOptions& options) {
  const int N = options.N_max > 0 ? options.N_max : table.n_max();
  std::vector<ComparabilityReport> out;
  out.push_back(verify_theorem_1(table, lambda, N, options.band));
  out.push_back(verify_theorem_2(table, lambda, N, options.band));
  out.push_back(verify_theorem_3(table, lambda, options.k_grid, options.band));
  auto t4 = verify_theorem_4(table, lambda, {options.z}, N, options.band);
  auto r4 = std::move(t4.per_z.front().second);
  if (!t4.convolution_holds) {
    r4.pass = false;
    r4.failure = "convolution identity fails";
  }
  out.push_back(std::move(r4));
  for (std::size_t i = 0; i < out.size(); ++i) out[i].claim = options.prefix + "." + std::to_string(i + 1);
  return out;
}

std::vector<RepellingRow> verify_repelling_bounds(const SkewSystem& system, int n_max) {
  require(system.alphabet_size() == 1, "repelling census needs a single map");
  const RationalMap& R = system.map(1);
  const int r = R.degree();
  require(r >= 2, "repelling census needs degree >= 2");
  require(n_max >= 1, "repelling census needs n_max >= 1");
  const bool infinity_fixed_superattracting = R.denominator().degree() == 0;
  std::vector<RepellingRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    RepellingRow row;
    row.n = n;
    bool flagged_infinity = false;
    for (const auto& p : periodic_points(system, n)) {
      row.points += p.multiplicity;
      if (p.z.is_infinity() && infinity_fixed_superattracting) {
        row.nonrepelling += p.multiplicity;
        flagged_infinity = true;
        continue;
      }
      try {
        if (classify_repelling(multiplier(system, p.word, p.z)))
          row.repelling += p.multiplicity;
        else
          row.nonrepelling += p.multiplicity;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::MultiplierUndefined) throw;
        row.undefined += p.multiplicity;
        row.notes.push_back("multiplier undefined at " + p.z.to_string());
      }
    }
    if (flagged_infinity) row.notes.push_back("infinity is a superattracting fixed point of a polynomial");
    double divisor_sum = 0.0;
    for (auto d : divisors(n))
      if (d < n) divisor_sum += std::pow(double(r), double(d));
    row.lower = std::pow(double(r), n) - divisor_sum - 4.0 * n * (r - 1);
    row.upper = 2.0 * std::pow(double(r), n);
    row.holds = row.repelling >= row.lower && row.repelling + row.undefined <= row.upper;
    if (row.lower <= 0.0) row.notes.push_back("lower bound is vacuous at this n");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace skewcount
