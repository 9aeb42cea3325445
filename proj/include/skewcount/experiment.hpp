#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewcount/analysis.hpp"
#include "skewcount/error.hpp"

namespace skewcount {

enum class TableMode { Exact, Numeric, Auto };

/// Typed view of a JSON experiment file; see README for the schema.
struct ExperimentConfig {
  std::vector<RationalMap> maps;
  Potential potential = Potential::zero();
  int n_max = 12;
  int N_max = 12;
  std::optional<double> lambda;
  TableMode mode = TableMode::Auto;
  FiberFilter fiber = FiberFilter::All;
  SkewOptions skew;
  std::int64_t zeta_terms = 10'000'000;
  double burn_in = 5.0;
  double band_ceiling = 4.0;
  /// Optional [lo, hi] per claim (thm1, thm2, thm4, cor2); hi <= 0 means N_max.
  std::vector<std::pair<std::string, std::pair<int, int>>> windows;
  std::vector<double> k_grid{0.1, 0.5, 1.0, 2.0, 5.0};
  std::vector<std::complex<double>> z_grid{{2.0, 0.0}};
  int dirichlet_N = 40;
  std::vector<double> rho_z;
  double meissel_tail = 1e-6;
  std::pair<int, int> lambda_fit{5, 12};
  int corollary_n = 12;
  int orbits_n = 3;
  int selftest_n = 4;
  std::string output_directory = "out";
  std::vector<std::string> formats{"csv", "json", "plotdata"};
  std::vector<std::string> warnings;

  /// Canonical JSON text with defaults filled in.
  std::string canonical;
  /// FNV-1a 64 of the canonical text without threads and output.directory,
  /// as 16 hex digits.
  std::string digest;

  std::pair<int, int> window(const std::string& claim, int default_lo, int default_hi) const;
  bool wants(const std::string& format) const;
};

/// Parses JSON text, then applies "key.path=value" overrides in order. A
/// value is read as JSON when it parses, else as a string. Throws Config.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  int exit_code = 0;  ///< 0 pass, 1 verification failure
  std::string summary;
  std::vector<OutputFile> files;
};

/// count | orbits | verify | series | repelling | selftest. Output files are
/// returned in memory; write_outputs puts them on disk.
RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config);

void write_outputs(const RunResult& result, const std::string& directory);

/// 2 for configuration problems, 3 for numerical failures, 1 when the
/// lambda hypothesis is rejected.
int exit_code_for(ErrorKind kind) noexcept;

/// {"error": {"kind", "message", "exit_code"}} on one line.
std::string error_record(ErrorKind kind, const std::string& message);

/// Table for the configured pipeline up to n.
CountTable build_table(const ExperimentConfig& config, int n);

/// Shortest round-trip decimal text.
std::string shortest(double v);

std::string tool_version();

}  // namespace skewcount
