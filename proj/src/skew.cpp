#include "skewcount/skew.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "map_kernels.hpp"
#include "parallel.hpp"
#include "roots_impl.hpp"
#include "skewcount/error.hpp"
#include "skewcount/numtheory.hpp"

namespace skewcount {

namespace {

/// |R'(z)| below this counts as a critical point for the log-derivative
/// potential.
constexpr double kCriticalEps = 1e-10;

template <class C>
detail::MapCoeffs<C> coeffs_as(const RationalMap& R) {
  detail::MapCoeffs<C> out;
  for (auto c : R.numerator().coefficients()) out.num.push_back(detail::ScalarTraits<C>::from(c));
  for (auto c : R.denominator().coefficients()) out.den.push_back(detail::ScalarTraits<C>::from(c));
  out.degree = R.degree();
  return out;
}

std::string where(const Word& w, const SpherePoint& z) {
  return "word " + word_to_string(w) + ", z = " + z.to_string();
}

/// R'(z) at a finite point; the unreduced quotient is 0/0 at poles of high
/// order, which reads as a pole here.
SpherePoint derivative_at(const SkewSystem& system, int letter, const SpherePoint& z) {
  try {
    return system.map_derivative(letter)(z);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IndeterminateEvaluation) throw;
    return SpherePoint::infinity();
  }
}

}  // namespace

std::string word_to_string(const Word& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(w[i]);
  }
  return s + ")";
}

Word rotate(const Word& w, std::size_t k) {
  if (w.empty()) return w;
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[(i + k) % w.size()];
  return out;
}

std::size_t primitive_length(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = w[i] == w[i - d];
    if (repeats) return d;
  }
  return n;
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t k = 1; k < w.size(); ++k) best = std::min(best, rotate(w, k));
  return best;
}

SkewSystem::SkewSystem(std::vector<RationalMap> maps, SkewOptions options)
    : maps_(std::move(maps)), options_(std::move(options)) {
  require(!maps_.empty(), "SkewSystem: at least one map is required");
  require(options_.period_closure > 0.0, "SkewSystem: period closure tolerance must be positive");
  require(options_.max_degree >= 1 && options_.max_words >= 1, "SkewSystem: caps must be positive");
  for (const auto& R : maps_) derivatives_.push_back(derivative(R));
}

const RationalMap& SkewSystem::map(int letter) const {
  require(letter >= 1 && letter <= alphabet_size(), "SkewSystem: letter " + std::to_string(letter) + " out of range");
  return maps_[static_cast<std::size_t>(letter - 1)];
}

const MapDerivative& SkewSystem::map_derivative(int letter) const {
  require(letter >= 1 && letter <= alphabet_size(), "SkewSystem: letter " + std::to_string(letter) + " out of range");
  return derivatives_[static_cast<std::size_t>(letter - 1)];
}

std::vector<int> SkewSystem::degrees() const {
  std::vector<int> out;
  for (const auto& R : maps_) out.push_back(R.degree());
  return out;
}

void SkewSystem::validate(const Word& w) const {
  require(!w.empty(), "word must be non-empty");
  for (int letter : w) {
    require(letter >= 1 && letter <= alphabet_size(),
            "letter " + std::to_string(letter) + " outside 1.." + std::to_string(alphabet_size()));
  }
}

Potential Potential::constant(double c) {
  require(std::isfinite(c), "Constant potential: c must be finite");
  Potential p(Kind::Constant);
  p.c_ = c;
  return p;
}

Potential Potential::symbol_weight(std::vector<double> beta) {
  require(!beta.empty(), "SymbolWeight potential: beta must be non-empty");
  for (double b : beta) require(std::isfinite(b), "SymbolWeight potential: beta must be finite");
  Potential p(Kind::SymbolWeight);
  p.beta_ = std::move(beta);
  return p;
}

Potential Potential::plug_in(Callable f, std::string name) {
  require(static_cast<bool>(f), "PlugIn potential: callable is empty");
  Potential p(Kind::PlugIn);
  p.callable_ = std::move(f);
  p.plugin_name_ = std::move(name);
  return p;
}

std::string Potential::name() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::Constant:
      return "constant";
    case Kind::SymbolWeight:
      return "symbol_weight";
    case Kind::LogModulusDerivative:
      return "log_modulus_derivative";
    case Kind::PlugIn:
      return plugin_name_;
  }
  return "?";
}

double Potential::operator()(const SkewSystem& system, const Word& rotation, const SpherePoint& z) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return c_;
    case Kind::SymbolWeight: {
      const int letter = rotation.at(0);
      if (letter < 1 || static_cast<std::size_t>(letter) > beta_.size()) {
        fail(ErrorKind::PotentialUndefined, "SymbolWeight: no weight for letter " + std::to_string(letter));
      }
      return beta_[static_cast<std::size_t>(letter - 1)];
    }
    case Kind::LogModulusDerivative: {
      if (z.is_infinity()) fail(ErrorKind::PotentialUndefined, "log|R'| undefined at infinity");
      const SpherePoint d = derivative_at(system, rotation.at(0), z);
      if (d.is_infinity()) fail(ErrorKind::PotentialUndefined, "log|R'| undefined at a pole, " + where(rotation, z));
      const double m = std::abs(d.value());
      if (m <= kCriticalEps) {
        fail(ErrorKind::PotentialUndefined, "log|R'| undefined at a critical point, " + where(rotation, z));
      }
      return std::log(m);
    }
    case Kind::PlugIn: {
      const double v = callable_(rotation, z);
      if (!std::isfinite(v)) {
        fail(ErrorKind::PotentialUndefined, plugin_name_ + " returned a non-finite value, " + where(rotation, z));
      }
      return v;
    }
  }
  return 0.0;
}

std::vector<Word> enumerate_words(int M, int n, std::int64_t max_words) {
  require(M >= 1, "enumerate_words: M must be >= 1");
  require(n >= 1, "enumerate_words: n must be >= 1");
  std::int64_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= M;
    if (count > max_words) {
      fail(ErrorKind::EnumerationCapExceeded, "enumerate_words: " + std::to_string(M) + "^" + std::to_string(n) +
                                                   " words exceeds the cap of " + std::to_string(max_words));
    }
  }
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  Word w(static_cast<std::size_t>(n), 1);
  for (std::int64_t k = 0; k < count; ++k) {
    out.push_back(w);
    for (int i = n - 1; i >= 0; --i) {
      if (++w[static_cast<std::size_t>(i)] <= M) break;
      w[static_cast<std::size_t>(i)] = 1;
    }
  }
  return out;
}

std::int64_t word_degree(const SkewSystem& system, const Word& w) {
  system.validate(w);
  std::int64_t d = 1;
  for (int letter : w) {
    d *= system.map(letter).degree();
    if (d > system.options().max_degree) {
      fail(ErrorKind::EnumerationCapExceeded, "word " + word_to_string(w) + ": composed degree exceeds the cap of " +
                                                   std::to_string(system.options().max_degree));
    }
  }
  return d;
}

RationalMap compose_along_word(const SkewSystem& system, const Word& w) {
  word_degree(system, w);
  RationalMap acc = system.map(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) acc = compose(system.map(w[i]), acc, system.options().map_tol);
  return acc;
}

std::vector<SpherePoint> fiber_orbit(const SkewSystem& system, const Word& w, const SpherePoint& z, std::size_t L) {
  system.validate(w);
  std::vector<SpherePoint> out;
  out.reserve(L);
  SpherePoint cur = z;
  for (std::size_t i = 0; i < L; ++i) {
    out.push_back(cur);
    if (i + 1 < L) cur = eval_sphere(system.map(w[i % w.size()]), cur);
  }
  return out;
}

int prime_period(const SkewSystem& system, const Word& w, const SpherePoint& z, double tol) {
  system.validate(w);
  require(tol > 0.0, "prime_period: tolerance must be positive");
  const auto n = static_cast<std::int64_t>(w.size());
  const std::size_t p = primitive_length(w);
  SpherePoint cur = z;
  std::size_t applied = 0;
  for (auto d : divisors(n)) {
    if (d == n) break;
    if (static_cast<std::size_t>(d) % p != 0) continue;
    for (; applied < static_cast<std::size_t>(d); ++applied) cur = eval_sphere(system.map(w[applied]), cur);
    const double dist = chordal_distance(cur, z);
    if (dist <= tol) return static_cast<int>(d);
    if (dist <= 10.0 * tol) {
      std::ostringstream msg;
      msg << "period detection ambiguous: " << where(w, z) << " misses closing after " << d
          << " steps by chordal distance " << dist << " (tolerance " << tol << ")";
      fail(ErrorKind::PeriodAmbiguous, msg.str());
    }
  }
  return static_cast<int>(n);
}

double ergodic_sum(const SkewSystem& system, const Potential& f, const Word& w, const SpherePoint& z, std::size_t L) {
  require(L >= 1, "ergodic_sum: length must be >= 1");
  system.validate(w);
  if (f.kind() == Potential::Kind::Zero) return 0.0;
  CompensatedSum sum;
  SpherePoint cur = z;
  for (std::size_t i = 0; i < L; ++i) {
    const Word rot = rotate(w, i % w.size());
    try {
      sum.add(f(system, rot, cur));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PotentialUndefined) throw;
      fail(ErrorKind::PotentialUndefined,
           "potential undefined at orbit point " + std::to_string(i) + " of " + where(w, z) + ": " + e.what());
    }
    if (i + 1 < L) cur = eval_sphere(system.map(rot[0]), cur);
  }
  return sum.value();
}

namespace {

struct FixedPoints {
  std::vector<Root> finite;
  int infinity_multiplicity = 0;
};

FixedPoints solve_standard(const SkewSystem& system, const Word& w) {
  const auto R = compose_along_word(system, w);
  const auto fp = fixed_point_polynomial(R, system.options().map_tol);
  FixedPoints out;
  out.infinity_multiplicity = fp.infinity_multiplicity;
  if (fp.F.degree() >= 1) out.finite = find_roots(fp.F, system.options().roots).roots;
  return out;
}

FixedPoints solve_extended(const SkewSystem& system, const Word& w) {
  using detail::QuadComplex;
  word_degree(system, w);
  const double eps = system.options().map_tol.coefficient_eps;
  auto acc = coeffs_as<QuadComplex>(system.map(w[0]));
  for (std::size_t i = 1; i < w.size(); ++i) {
    acc = detail::compose_coeffs(coeffs_as<QuadComplex>(system.map(w[i])), acc, eps);
  }
  auto fp = detail::fixed_point_coeffs(acc, eps);
  FixedPoints out;
  out.infinity_multiplicity = fp.infinity_multiplicity;
  if (fp.F.size() >= 2) out.finite = detail::find_roots_in(fp.F, system.options().roots).roots;
  return out;
}

}  // namespace

std::vector<SkewPeriodicPoint> periodic_points_for_word(const SkewSystem& system, const Word& w) {
  const auto degree = word_degree(system, w);
  const auto& opts = system.options();
  const bool extended = opts.precision == Precision::Extended && degree > opts.extended_above;
  const FixedPoints fixed = extended ? solve_extended(system, w) : solve_standard(system, w);

  std::vector<SkewPeriodicPoint> out;
  std::int64_t total = fixed.infinity_multiplicity;
  for (const auto& r : fixed.finite) {
    out.push_back({w, SpherePoint::finite(r.value), r.multiplicity, 1, 0.0});
    total += r.multiplicity;
  }
  if (fixed.infinity_multiplicity > 0) out.push_back({w, SpherePoint::infinity(), fixed.infinity_multiplicity, 1, 0.0});
  if (total != degree + 1) {
    fail(ErrorKind::Inconsistent, "word " + word_to_string(w) + ": fixed points sum to " + std::to_string(total) +
                                      ", expected " + std::to_string(degree + 1));
  }
  for (auto& p : out) p.prime_period = prime_period(system, w, p.z, opts.period_closure);
  return out;
}

std::vector<SkewPeriodicPoint> periodic_points(const SkewSystem& system, int n, const Potential* f) {
  const auto words = enumerate_words(system.alphabet_size(), n, system.options().max_words);
  std::vector<std::vector<SkewPeriodicPoint>> per_word(words.size());
  detail::parallel_for(words.size(), system.options().threads, [&](std::size_t i) {
    auto pts = periodic_points_for_word(system, words[i]);
    if (f != nullptr) {
      for (auto& p : pts) p.weight_exponent = ergodic_sum(system, *f, p.word, p.z, static_cast<std::size_t>(p.prime_period));
    }
    per_word[i] = std::move(pts);
  });
  std::vector<SkewPeriodicPoint> out;
  for (auto& v : per_word) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

std::vector<ClosedOrbit> group_into_orbits(const SkewSystem& system, const std::vector<SkewPeriodicPoint>& points,
                                           int n) {
  require(n >= 1, "group_into_orbits: n must be >= 1");
  const double tol = system.options().period_closure;
  std::map<Word, std::vector<std::size_t>> by_word;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].prime_period == n && static_cast<int>(points[i].word.size()) == n,
            "group_into_orbits: every point must have word length and prime period " + std::to_string(n));
    by_word[points[i].word].push_back(i);
  }
  auto mismatch = [&](const SkewPeriodicPoint& p, const std::string& what) {
    fail(ErrorKind::OrbitClosureMismatch, "orbit of " + where(p.word, p.z) + ": " + what);
  };

  std::vector<bool> assigned(points.size(), false);
  std::vector<ClosedOrbit> orbits;
  for (std::size_t start = 0; start < points.size(); ++start) {
    if (assigned[start]) continue;
    std::vector<std::size_t> members{start};
    assigned[start] = true;
    std::size_t cur = start;
    for (int step = 1; step <= n; ++step) {
      const auto& p = points[cur];
      const Word next_word = rotate(p.word, 1);
      const SpherePoint image = eval_sphere(system.map(p.word[0]), p.z);
      if (step == n) {
        if (chordal_distance(image, points[start].z) > tol) mismatch(points[start], "does not close after n steps");
        break;
      }
      const auto it = by_word.find(next_word);
      if (it == by_word.end()) mismatch(p, "no points for rotated word " + word_to_string(next_word));
      std::size_t best = points.size();
      double best_dist = INFINITY;
      for (auto j : it->second) {
        const double d = chordal_distance(points[j].z, image);
        if (d < best_dist) {
          best_dist = d;
          best = j;
        }
      }
      if (best_dist > tol) mismatch(p, "S-image " + image.to_string() + " not among the enumerated points");
      if (assigned[best]) mismatch(p, "S-image already belongs to an orbit");
      assigned[best] = true;
      members.push_back(best);
      cur = best;
    }

    std::size_t rep = 0;
    for (std::size_t k = 1; k < members.size(); ++k) {
      const auto& a = points[members[k]];
      const auto& b = points[members[rep]];
      if (a.word < b.word || (a.word == b.word && a.z < b.z)) rep = k;
    }
    ClosedOrbit orbit;
    orbit.length = n;
    for (std::size_t k = 0; k < members.size(); ++k) orbit.members.push_back(points[members[(rep + k) % members.size()]]);
    orbit.representative = orbit.members.front();
    orbit.multiplicity = orbit.representative.multiplicity;
    orbit.weight_exponent = orbit.representative.weight_exponent;
    for (const auto& m : orbit.members) {
      if (m.multiplicity != orbit.multiplicity) {
        fail(ErrorKind::Inconsistent, "orbit of " + where(m.word, m.z) + ": member multiplicities differ");
      }
      if (std::abs(m.weight_exponent - orbit.weight_exponent) > 1e-8 * std::max(1.0, std::abs(orbit.weight_exponent))) {
        fail(ErrorKind::Inconsistent, "orbit of " + where(m.word, m.z) + ": ergodic sums differ across members");
      }
    }
    orbits.push_back(std::move(orbit));
  }
  std::sort(orbits.begin(), orbits.end(), [](const ClosedOrbit& a, const ClosedOrbit& b) {
    const auto& x = a.representative;
    const auto& y = b.representative;
    return x.word < y.word || (x.word == y.word && x.z < y.z);
  });
  return orbits;
}

Complex multiplier(const SkewSystem& system, const Word& w, const SpherePoint& z) {
  system.validate(w);
  Complex product = 1.0;
  SpherePoint cur = z;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (cur.is_infinity()) {
      fail(ErrorKind::MultiplierUndefined, "multiplier undefined: orbit of " + where(w, z) + " passes through infinity");
    }
    const SpherePoint next = eval_sphere(system.map(w[i]), cur);
    const SpherePoint d = next.is_infinity() ? next : derivative_at(system, w[i], cur);
    if (d.is_infinity()) {
      fail(ErrorKind::MultiplierUndefined, "multiplier undefined: orbit of " + where(w, z) + " meets a pole");
    }
    product *= d.value();
    cur = next;
  }
  return product;
}

FilteredPoints apply_fiber_filter(const SkewSystem& system, std::vector<SkewPeriodicPoint> points, FiberFilter filter) {
  FilteredPoints out;
  if (filter == FiberFilter::All) {
    out.points = std::move(points);
    return out;
  }
  for (auto& p : points) {
    try {
      if (std::abs(multiplier(system, p.word, p.z)) >= 1.0 - 1e-6) out.points.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MultiplierUndefined) throw;
      ++out.undefined;
    }
  }
  return out;
}

}  // namespace skewcount
