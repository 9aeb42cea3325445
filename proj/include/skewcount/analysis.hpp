#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "skewcount/counting.hpp"

namespace skewcount {

struct RatioPoint {
  double x = 0.0;  ///< N, k or z depending on the claim
  double A = 0.0;
  double B = 0.0;
  double ratio = 0.0;
};

/// Two-sided band kappa1 B <= A <= kappa2 B observed over a window.
struct ComparabilityReport {
  std::string claim;      ///< thm1..thm4, rho, cor1.x, cor2.x
  std::string statement;  ///< "A ~ B" in words
  std::string x_label = "N";
  std::vector<RatioPoint> points;  ///< window only
  double burn_in = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double band_ratio = 0.0;
  double ceiling = 4.0;
  bool pass = false;
  std::string failure;  ///< why pass is false; empty on pass
  std::vector<std::pair<std::string, double>> context;
  std::vector<std::string> notes;
};

struct BandOptions {
  double burn_in = 5.0;
  double ceiling = 4.0;
};

/// Ratios A/B on points with x >= burn_in. Throws NonpositiveComparator when
/// some B <= 0 there and WindowTooShort below five points.
ComparabilityReport ratio_band(const std::string& claim, const std::vector<double>& x, const std::vector<double>& A,
                               const std::vector<double>& B, const BandOptions& options);

/// pi_S(N) against lambda^N / N for N in [burn_in, N_max].
ComparabilityReport verify_theorem_1(const CountTable& table, double lambda, int N_max, const BandOptions& options);

/// Mertens sum against log N for N in [burn_in, N_max].
ComparabilityReport verify_theorem_2(const CountTable& table, double lambda, int N_max, const BandOptions& options);

/// Meissel sum against 1/k over the grid; burn_in is ignored.
ComparabilityReport verify_theorem_3(const CountTable& table, double lambda, const std::vector<double>& k_grid,
                                     const BandOptions& options, double tail_tol = 1e-6);

struct Theorem4Report {
  int convolution_checked_to = 0;
  bool convolution_holds = false;
  /// One band per z over truncation points N' in [burn_in, N].
  std::vector<std::pair<std::complex<double>, ComparabilityReport>> per_z;
  bool pass() const;
};

Theorem4Report verify_theorem_4(const CountTable& table, double lambda, const std::vector<std::complex<double>>& z_grid,
                                int N, const BandOptions& options);

/// rho_f(z) against log(1/(1 - z lambda)) over real z in the grid. lambda_hat
/// guards the radius; burn_in is ignored.
ComparabilityReport verify_rho(const CountTable& table, double lambda, double lambda_hat,
                               const std::vector<double>& z_grid, const BandOptions& options);

/// The four statements above with a prescribed lambda, relabelled prefix.1..4.
struct CorollaryOptions {
  std::string prefix = "cor1";
  BandOptions band;
  int N_max = 0;  ///< theorem 1, 2 and 4 sweep end; 0 means the table end
  std::vector<double> k_grid{0.1, 0.5, 1.0, 2.0, 5.0};
  std::complex<double> z{2.0, 0.0};
};

std::vector<ComparabilityReport> verify_corollary(const CountTable& table, double lambda,
                                                  const CorollaryOptions& options);

struct RepellingRow {
  int n = 0;
  int points = 0;  ///< Per_n with multiplicity
  int repelling = 0;
  int nonrepelling = 0;
  int undefined = 0;  ///< multiplier not computable; flagged
  double lower = 0.0;
  double upper = 0.0;
  bool holds = false;
  std::vector<std::string> notes;
};

/// Census of repelling period-n points of a single map with the sandwich
///   r^n - sum_{d<n, d|n} r^d - 4n(r-1) <= #Rep <= 2 r^n.
/// A fixed infinity of a polynomial of degree >= 2 is superattracting. Other
/// undefined multipliers count against both sides: repelling alone must
/// clear the lower bound and repelling + undefined must stay below the upper.
std::vector<RepellingRow> verify_repelling_bounds(const SkewSystem& system, int n_max);

}  // namespace skewcount
