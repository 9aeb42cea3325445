#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skewcount/rational_map.hpp"

namespace skewcount {

/// A finite word over {1, ..., M}; the repeating block of a periodic symbol
/// sequence.
using Word = std::vector<int>;

std::string word_to_string(const Word& w);
/// Left rotation by k letters: (w_{k+1} ... w_n w_1 ... w_k).
Word rotate(const Word& w, std::size_t k);
/// Length of the shortest prefix u with w = u^(n/|u|).
std::size_t primitive_length(const Word& w);
/// Lexicographically least rotation.
Word least_rotation(const Word& w);

enum class Precision { Standard, Extended };

struct SkewOptions {
  MapTolerances map_tol;
  RootOptions roots;
  /// Chordal tolerance for deciding that a fiber orbit has closed.
  double period_closure = 1e-7;
  int max_degree = 1024;
  std::int64_t max_words = 4096;
  Precision precision = Precision::Standard;
  /// Word compositions above this degree use the extended path when
  /// precision is Extended.
  int extended_above = 512;
  unsigned threads = 1;
};

/// The generators R_1, ..., R_M of the skew product S(w, z) = (shift w, R_{w_1} z).
class SkewSystem {
 public:
  explicit SkewSystem(std::vector<RationalMap> maps, SkewOptions options = {});

  int alphabet_size() const noexcept { return static_cast<int>(maps_.size()); }
  /// Generator for a 1-based letter.
  const RationalMap& map(int letter) const;
  const MapDerivative& map_derivative(int letter) const;
  const std::vector<RationalMap>& maps() const noexcept { return maps_; }
  std::vector<int> degrees() const;
  const SkewOptions& options() const noexcept { return options_; }
  SkewOptions& options() noexcept { return options_; }

  /// Throws InvalidArgument for an empty word or a letter out of range.
  void validate(const Word& w) const;

 private:
  std::vector<RationalMap> maps_;
  std::vector<MapDerivative> derivatives_;
  SkewOptions options_;
};

/// Real-valued function on the skew-product space.
///
/// Evaluation at (rotation, z) means f(sequence rotation^inf, z). Undefined
/// evaluations throw PotentialUndefined; no NaN is ever returned.
class Potential {
 public:
  enum class Kind { Zero, Constant, SymbolWeight, LogModulusDerivative, PlugIn };
  using Callable = std::function<double(const Word& rotation, const SpherePoint& z)>;

  static Potential zero() { return Potential(Kind::Zero); }
  static Potential constant(double c);
  /// beta[j] is the weight of letter j + 1.
  static Potential symbol_weight(std::vector<double> beta);
  /// log |R'_{w_1}(z)|.
  static Potential log_modulus_derivative() { return Potential(Kind::LogModulusDerivative); }
  static Potential plug_in(Callable f, std::string name = "plugin");

  Kind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  std::string name() const;
  /// Zero, Constant and SymbolWeight depend on the word only.
  bool word_only() const noexcept {
    return kind_ == Kind::Zero || kind_ == Kind::Constant || kind_ == Kind::SymbolWeight;
  }

  double operator()(const SkewSystem& system, const Word& rotation, const SpherePoint& z) const;

 private:
  explicit Potential(Kind kind) : kind_(kind) {}
  Kind kind_;
  double c_ = 0.0;
  std::vector<double> beta_;
  Callable callable_;
  std::string plugin_name_;
};

struct SkewPeriodicPoint {
  Word word;
  SpherePoint z = SpherePoint::infinity();
  int multiplicity = 1;
  int prime_period = 1;
  /// f^{prime_period} at this point; zero until weighted.
  double weight_exponent = 0.0;
};

struct ClosedOrbit {
  int length = 0;
  SkewPeriodicPoint representative;
  std::vector<SkewPeriodicPoint> members;  ///< S-iterates of the representative
  int multiplicity = 1;
  double weight_exponent = 0.0;
};

/// All M^n words in lexicographic order. Throws EnumerationCapExceeded above
/// max_words.
std::vector<Word> enumerate_words(int M, int n, std::int64_t max_words = 4096);

/// Product of generator degrees along w.
std::int64_t word_degree(const SkewSystem& system, const Word& w);

/// R_{w_n} o ... o R_{w_1}, last letter outermost.
RationalMap compose_along_word(const SkewSystem& system, const Word& w);

/// The fiber orbit z_0 = z, z_{i+1} = R_{w_{i+1 mod n}}(z_i), i < L.
std::vector<SpherePoint> fiber_orbit(const SkewSystem& system, const Word& w, const SpherePoint& z, std::size_t L);

/// Fixed points of R_w with multiplicity (infinity included, last) and
/// their prime periods. Multiplicities sum to deg R_w + 1.
std::vector<SkewPeriodicPoint> periodic_points_for_word(const SkewSystem& system, const Word& w);

/// Least d | n such that w repeats its length-d prefix and the prefix
/// composition returns z to within tol. Throws PeriodAmbiguous when a
/// candidate misses closing by less than 10 tol.
int prime_period(const SkewSystem& system, const Word& w, const SpherePoint& z, double tol);

/// f^L along the orbit of (w^inf, z), compensated.
double ergodic_sum(const SkewSystem& system, const Potential& f, const Word& w, const SpherePoint& z, std::size_t L);

/// Per_n(S): every word of length n in order, points in sphere order within
/// each word. Words are solved on options().threads workers; the result does
/// not depend on the thread count. With f, weight_exponent is filled in.
std::vector<SkewPeriodicPoint> periodic_points(const SkewSystem& system, int n, const Potential* f = nullptr);

/// Partition prime-period-n points into S-orbits. Throws
/// OrbitClosureMismatch if an S-image is missing among the points.
std::vector<ClosedOrbit> group_into_orbits(const SkewSystem& system, const std::vector<SkewPeriodicPoint>& points,
                                           int n);

/// Chain-rule product of generator derivatives around the fiber orbit.
/// Throws MultiplierUndefined at infinity or at a pole along the orbit.
Complex multiplier(const SkewSystem& system, const Word& w, const SpherePoint& z);

inline bool classify_repelling(Complex m) noexcept { return std::abs(m) > 1.0; }

enum class FiberFilter { All, Julia };

struct FilteredPoints {
  std::vector<SkewPeriodicPoint> points;
  /// Points dropped because the multiplier could not be evaluated.
  int undefined = 0;
};

/// Julia keeps points with |multiplier| >= 1 - 1e-6 (repelling or
/// indifferent); points with undefined multiplier are dropped and counted.
FilteredPoints apply_fiber_filter(const SkewSystem& system, std::vector<SkewPeriodicPoint> points, FiberFilter filter);

}  // namespace skewcount
