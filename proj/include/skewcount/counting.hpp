#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "skewcount/skew.hpp"

namespace skewcount {

using BigInt = boost::multiprecision::cpp_int;

enum class CountMode { Exact, Floating };

std::string to_string(CountMode mode);

/// Closed form for C(n) / lambda^n used to certify series tails.
///
/// Valid for n >= valid_from when C(n) = weight^n * C0(n) and
/// n C0(n) = sum_{d|n} mu(n/d) (base^d + minor^d) with minor < base, so that
/// C(n) / lambda^n = 1/n + e(n) with
/// |e(n)| <= (q^n + 2 base/(base-1) base^(-n/2)) / n, q = minor/base and
/// lambda = base * weight.
struct GrowthModel {
  bool available = false;
  double base = 0.0;
  double minor = 0.0;
  double weight = 1.0;
  int valid_from = 1;
  std::string source;

  double lambda() const noexcept { return base * weight; }
  /// C0(n) / base^n from the closed form.
  double scaled_count(int n) const;
  /// Bound on |e(n)| for a single n.
  double error_bound(int n) const;
};

/// E(n), D(n), C(n) for n = 1..n_max. Exact tables hold big integers;
/// floating tables hold doubles. Immutable once built.
class CountTable {
 public:
  static CountTable exact(std::vector<BigInt> E, std::vector<BigInt> D);
  static CountTable floating(std::vector<double> E, std::vector<double> D);

  CountMode mode() const noexcept { return mode_; }
  int n_max() const noexcept { return n_max_; }

  /// Exact entries; throw InvalidArgument on a floating table.
  const BigInt& E_exact(int n) const;
  const BigInt& D_exact(int n) const;
  const BigInt& C_exact(int n) const;

  /// Entries as doubles (may overflow to inf for large exact entries).
  double E(int n) const;
  double D(int n) const;
  double C(int n) const;

  double log_E(int n) const;
  /// E(n) / lambda^n and C(n) / lambda^n without intermediate overflow.
  double E_over_power(int n, double lambda) const;
  double C_over_power(int n, double lambda) const;

  /// Decimal text: exact integers in full, reals as shortest round trip.
  std::string E_text(int n) const;
  std::string D_text(int n) const;
  std::string C_text(int n) const;

  // metadata
  std::string potential = "zero";
  std::string source;
  std::string fiber_filter = "all";
  std::vector<int> degrees;
  GrowthModel model;
  /// Points dropped by the fiber filter for an undefined multiplier.
  int undefined_points = 0;

 private:
  void check_index(int n) const;

  CountMode mode_ = CountMode::Floating;
  int n_max_ = 0;
  std::vector<BigInt> Ex_, Dx_, Cx_;
  std::vector<double> Ef_, Df_, Cf_;
};

/// (sum r_j)^n + M^n.
BigInt E_exact_zero(int n, const std::vector<int>& degrees);

/// D(n) for f = 0 by counting primitive words and exact fiber periods,
/// without reference to E.
BigInt D_exact_zero_direct(int n, const std::vector<int>& degrees);

/// D(n) for a word-only potential whose value on letter j is beta[j] + c.
double D_word_potential_direct(int n, const std::vector<int>& degrees, const std::vector<double>& beta);

/// f = 0 table: E from the closed formula, D from the primitive-word count.
CountTable build_exact_table(const std::vector<int>& degrees, int n_max);

/// Constant or SymbolWeight potential without enumeration; E(n) = sum_{d|n} D(d).
CountTable build_word_potential_table(const std::vector<int>& degrees, const Potential& f, int n_max);

/// Root-finding enumeration of Per_n for n = 1..n_max.
CountTable build_enumerated_table(const SkewSystem& system, const Potential& f, int n_max,
                                  FiberFilter filter = FiberFilter::All);

/// (1/n) sum_{d|n} mu(n/d) E(d). Throws MissingDivisorData naming an absent d.
BigInt C_mobius(const std::map<int, BigInt>& E, int n);
double C_mobius(const std::map<int, double>& E, int n);
/// Same, reading E from a table.
BigInt C_mobius_exact(const CountTable& table, int n);
double C_mobius_floating(const CountTable& table, int n);

/// Largest n <= N where E(n) = sum_{d|n} d C(d) fails, or 0 when it holds
/// throughout (exactly, or to relative 1e-9 for floating tables).
int convolution_failure(const CountTable& table, int N);

double pi_S(const CountTable& table, int N);
BigInt pi_S_exact(const CountTable& table, int N);

/// sum_{n<=N} C(n) / lambda^n. Throws LambdaNotPositive for lambda <= 1.
double mertens_sum(const CountTable& table, double lambda, int N);

enum class SeriesKind { PrimeOrbit, Mertens, Meissel, DirichletPartial, RhoSeries };
std::string to_string(SeriesKind kind);

struct Truncation {
  int terms = 0;               ///< partial sum runs over n <= terms
  double tail_estimate = 0.0;  ///< added to the partial sum
  double tail_bound = 0.0;     ///< certified bound on |true tail - tail_estimate|
  std::string method;
};

struct SeriesValue {
  SeriesKind kind = SeriesKind::PrimeOrbit;
  int N = 0;
  double k = 0.0;
  std::complex<double> z{};
  std::complex<double> value{};
  std::optional<Truncation> truncation;
};

/// sum_{n>=1} C(n) / (n^k lambda^n).
///
/// With an applicable growth model the tail past N is the Hurwitz zeta tail
/// plus a closed-form remainder bound. Otherwise C(n)/lambda^n <= K/n with
/// K = max_n E(n)/lambda^n * lambda/(lambda-1) taken from the table, and the
/// tail is bounded by K N^-k / k. N is the least index whose bound is below
/// tail_tol; TailNotCertifiable when the table is too short.
SeriesValue meissel_sum(const CountTable& table, double lambda, double k, double tail_tol);

struct DirichletPartial {
  int N = 0;
  std::complex<double> z{};
  /// Both partial sums carry a common factor lambda^-N to stay finite.
  std::complex<double> lhs_scaled{};
  std::complex<double> rhs_scaled{};
  double log_scale = 0.0;  ///< N log lambda
  double zeta_error_bound = 0.0;
  int convolution_checked_to = 0;
  bool convolution_holds = false;
  std::string reading = "matched truncation at N of both divergent series";

  /// |lhs / rhs|
  double ratio() const { return std::abs(lhs_scaled / rhs_scaled); }
};

/// lhs = sum_{n<=N} C(n)/n^z, rhs = sum_{n<=N} lambda^n/n^(z+1) / zeta(z),
/// plus the exact convolution check up to N.
DirichletPartial dirichlet_partial(const CountTable& table, double lambda, std::complex<double> z, int N);

struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square residual of log E(n) about the line.
  double residual = 0.0;
  int n_lo = 0;
  int n_hi = 0;
};

LogLinearFit fit_log_growth(const CountTable& table, int n_lo, int n_hi);

struct LambdaEstimate {
  double lambda = 0.0;
  LogLinearFit fit;
};

/// exp(slope) of log E(n) on [n_lo, n_hi]. Throws HypothesisImplausible when
/// the residual exceeds residual_ceiling or the estimate is not above 1.
LambdaEstimate lambda_estimate(const CountTable& table, int n_lo, int n_hi, double residual_ceiling = 0.1);

/// exp(-slope): the estimated radius of convergence of rho_f.
double radius_estimate(const CountTable& table, int n_lo, int n_hi);

/// rho_f(z) = sum E(n) z^n / n truncated at the table end. lambda_hat is the
/// growth estimate used for the radius guard (OutsideRadius when
/// |z| lambda_hat >= 0.99) and for the reported tail bound.
SeriesValue rho_series(const CountTable& table, std::complex<double> z, double lambda_hat);

/// Growth model for f = 0 or constant potentials on the full sphere.
GrowthModel word_growth_model(const std::vector<int>& degrees, const Potential& f);

}  // namespace skewcount
