#include "skewcount/counting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "skewcount/error.hpp"
#include "skewcount/numtheory.hpp"

namespace skewcount {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double log_big(const BigInt& a) {
  const auto bits = static_cast<long>(boost::multiprecision::msb(a));
  const long shift = std::max(0L, bits - 62);
  const BigInt top = a >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * kLn2;
}

/// a / b for positive big integers, rounded to double.
double big_quotient(const BigInt& a, const BigInt& b) {
  const long sa = static_cast<long>(boost::multiprecision::msb(a));
  const long sb = static_cast<long>(boost::multiprecision::msb(b));
  const long shift = 62 - (sa - sb);
  const BigInt q = shift >= 0 ? BigInt((a << shift) / b) : BigInt(a / (b << -shift));
  return std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
}

/// a / lambda^n without overflow; exact division when lambda is an integer.
double big_over_power(const BigInt& a, double lambda, int n) {
  if (a == 0) return 0.0;
  const bool negative = a < 0;
  const BigInt mag = negative ? BigInt(-a) : a;
  double r;
  if (lambda == std::floor(lambda) && lambda >= 1.0 && lambda < 2147483648.0) {
    r = big_quotient(mag, boost::multiprecision::pow(BigInt(static_cast<long long>(lambda)), static_cast<unsigned>(n)));
  } else {
    r = std::exp(log_big(mag) - n * std::log(lambda));
  }
  return negative ? -r : r;
}

double float_over_power(double a, double lambda, int n) {
  if (a == 0.0) return 0.0;
  const double p = std::pow(lambda, n);
  if (std::isfinite(p) && p > 0.0) {
    const double r = a / p;
    if (std::isfinite(r) && r != 0.0) return r;
  }
  return std::copysign(std::exp(std::log(std::abs(a)) - n * std::log(lambda)), a);
}

/// Primitive-word sums for f = 0, cached across n.
///
/// P(p, e) = sum over primitive words u of length p of deg(u)^e. Every word
/// of length p is v^(p/q) for a unique primitive v, which inverts to
/// P(p, e) = sum_{q|p} mu(p/q) S(e p / q)^q with S(t) = sum_j r_j^t.
class ZeroCounter {
 public:
  explicit ZeroCounter(const std::vector<int>& degrees) : degrees_(degrees) {
    require(!degrees.empty(), "degree list must be non-empty");
    for (int r : degrees) require(r >= 1, "degrees must be >= 1");
  }

  BigInt D(int n) {
    BigInt total = 0;
    for (auto p : divisors(n)) {
      const auto m = n / p;
      for (auto e : divisors(m)) {
        const int mu = mobius(m / e);
        if (mu == 0) continue;
        BigInt term = P(static_cast<int>(p), static_cast<int>(e)) + P(static_cast<int>(p), 0);
        if (mu > 0) {
          total += term;
        } else {
          total -= term;
        }
      }
    }
    return total;
  }

 private:
  const BigInt& S(int t) {
    auto it = S_.find(t);
    if (it != S_.end()) return it->second;
    BigInt s = 0;
    for (int r : degrees_) s += boost::multiprecision::pow(BigInt(r), static_cast<unsigned>(t));
    return S_.emplace(t, std::move(s)).first->second;
  }

  const BigInt& P(int p, int e) {
    const auto key = std::make_pair(p, e);
    auto it = P_.find(key);
    if (it != P_.end()) return it->second;
    BigInt s = 0;
    for (auto q : divisors(p)) {
      const int mu = mobius(p / q);
      if (mu == 0) continue;
      BigInt term = boost::multiprecision::pow(S(static_cast<int>(e * p / q)), static_cast<unsigned>(q));
      if (mu > 0) {
        s += term;
      } else {
        s -= term;
      }
    }
    return P_.emplace(key, std::move(s)).first->second;
  }

  std::vector<int> degrees_;
  std::map<int, BigInt> S_;
  std::map<std::pair<int, int>, BigInt> P_;
};

/// Weighted analogue: P(p, e, s) = sum over primitive u of deg(u)^e e^{s beta(u)}.
long double weighted_P(const std::vector<int>& degrees, const std::vector<double>& beta, int p, int e, int s) {
  long double total = 0.0L;
  for (auto q : divisors(p)) {
    const int mu = mobius(p / q);
    if (mu == 0) continue;
    const auto scale = static_cast<long double>(p / q);
    long double T = 0.0L;
    for (std::size_t j = 0; j < degrees.size(); ++j) {
      T += std::pow(static_cast<long double>(degrees[j]), e * scale) * std::exp(s * scale * beta[j]);
    }
    total += mu * std::pow(T, static_cast<long double>(q));
  }
  return total;
}

void require_table_range(const CountTable& table, int N, const char* what) {
  require(N >= 0, std::string(what) + ": N must be >= 0");
  if (N > table.n_max()) {
    fail(ErrorKind::InvalidArgument,
         std::string(what) + ": N = " + std::to_string(N) + " exceeds the table end " + std::to_string(table.n_max()));
  }
}

void require_lambda(double lambda, const char* what) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << what << ": lambda must exceed 1, got " << lambda;
    fail(ErrorKind::LambdaNotPositive, msg.str());
  }
}

}  // namespace

std::string to_string(CountMode mode) { return mode == CountMode::Exact ? "exact" : "floating"; }

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::PrimeOrbit:
      return "prime_orbit";
    case SeriesKind::Mertens:
      return "mertens";
    case SeriesKind::Meissel:
      return "meissel";
    case SeriesKind::DirichletPartial:
      return "dirichlet_partial";
    case SeriesKind::RhoSeries:
      return "rho_series";
  }
  return "?";
}

double GrowthModel::scaled_count(int n) const {
  // (1/n) sum_{d|n} mu(n/d) (base^d + minor^d) / base^n
  double acc = 0.0;
  for (auto d : divisors(n)) {
    const int mu = mobius(n / d);
    if (mu == 0) continue;
    const double shift = std::pow(base, double(d - n));
    acc += mu * (shift + std::pow(minor / base, double(d)) * shift);
  }
  return acc / n;
}

double GrowthModel::error_bound(int n) const {
  const double q = minor / base;
  return (std::pow(q, n) + 2.0 * base / (base - 1.0) * std::pow(base, -0.5 * n)) / n;
}

CountTable CountTable::exact(std::vector<BigInt> E, std::vector<BigInt> D) {
  require(!E.empty() && E.size() == D.size(), "CountTable: E and D must have equal length n_max + 1");
  CountTable t;
  t.mode_ = CountMode::Exact;
  t.n_max_ = static_cast<int>(E.size()) - 1;
  t.Cx_.assign(E.size(), 0);
  for (int n = 1; n <= t.n_max_; ++n) {
    const auto& d = D[static_cast<std::size_t>(n)];
    if (d < 0 || d % n != 0) {
      fail(ErrorKind::Inconsistent, "CountTable: D(" + std::to_string(n) + ") = " + d.str() + " is not a multiple of n");
    }
    t.Cx_[static_cast<std::size_t>(n)] = d / n;
  }
  t.Ex_ = std::move(E);
  t.Dx_ = std::move(D);
  return t;
}

CountTable CountTable::floating(std::vector<double> E, std::vector<double> D) {
  require(!E.empty() && E.size() == D.size(), "CountTable: E and D must have equal length n_max + 1");
  CountTable t;
  t.mode_ = CountMode::Floating;
  t.n_max_ = static_cast<int>(E.size()) - 1;
  t.Cf_.assign(E.size(), 0.0);
  for (int n = 1; n <= t.n_max_; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (!std::isfinite(E[i]) || !std::isfinite(D[i])) {
      fail(ErrorKind::Inconsistent, "CountTable: non-finite entry at n = " + std::to_string(n));
    }
    t.Cf_[i] = D[i] / n;
  }
  t.Ef_ = std::move(E);
  t.Df_ = std::move(D);
  return t;
}

void CountTable::check_index(int n) const {
  if (n < 1 || n > n_max_) {
    fail(ErrorKind::InvalidArgument,
         "CountTable: index " + std::to_string(n) + " outside 1.." + std::to_string(n_max_));
  }
}

const BigInt& CountTable::E_exact(int n) const {
  check_index(n);
  require(mode_ == CountMode::Exact, "CountTable: exact entries requested from a floating table");
  return Ex_[static_cast<std::size_t>(n)];
}
const BigInt& CountTable::D_exact(int n) const {
  check_index(n);
  require(mode_ == CountMode::Exact, "CountTable: exact entries requested from a floating table");
  return Dx_[static_cast<std::size_t>(n)];
}
const BigInt& CountTable::C_exact(int n) const {
  check_index(n);
  require(mode_ == CountMode::Exact, "CountTable: exact entries requested from a floating table");
  return Cx_[static_cast<std::size_t>(n)];
}

double CountTable::E(int n) const {
  check_index(n);
  return mode_ == CountMode::Exact ? Ex_[static_cast<std::size_t>(n)].convert_to<double>()
                                   : Ef_[static_cast<std::size_t>(n)];
}
double CountTable::D(int n) const {
  check_index(n);
  return mode_ == CountMode::Exact ? Dx_[static_cast<std::size_t>(n)].convert_to<double>()
                                   : Df_[static_cast<std::size_t>(n)];
}
double CountTable::C(int n) const {
  check_index(n);
  return mode_ == CountMode::Exact ? Cx_[static_cast<std::size_t>(n)].convert_to<double>()
                                   : Cf_[static_cast<std::size_t>(n)];
}

double CountTable::log_E(int n) const {
  check_index(n);
  if (mode_ == CountMode::Exact) {
    const auto& e = Ex_[static_cast<std::size_t>(n)];
    return e > 0 ? log_big(e) : -INFINITY;
  }
  const double e = Ef_[static_cast<std::size_t>(n)];
  return e > 0.0 ? std::log(e) : -INFINITY;
}

double CountTable::E_over_power(int n, double lambda) const {
  check_index(n);
  return mode_ == CountMode::Exact ? big_over_power(Ex_[static_cast<std::size_t>(n)], lambda, n)
                                   : float_over_power(Ef_[static_cast<std::size_t>(n)], lambda, n);
}

double CountTable::C_over_power(int n, double lambda) const {
  check_index(n);
  return mode_ == CountMode::Exact ? big_over_power(Cx_[static_cast<std::size_t>(n)], lambda, n)
                                   : float_over_power(Cf_[static_cast<std::size_t>(n)], lambda, n);
}

std::string CountTable::E_text(int n) const {
  check_index(n);
  return mode_ == CountMode::Exact ? Ex_[static_cast<std::size_t>(n)].str() : shortest(Ef_[static_cast<std::size_t>(n)]);
}
std::string CountTable::D_text(int n) const {
  check_index(n);
  return mode_ == CountMode::Exact ? Dx_[static_cast<std::size_t>(n)].str() : shortest(Df_[static_cast<std::size_t>(n)]);
}
std::string CountTable::C_text(int n) const {
  check_index(n);
  return mode_ == CountMode::Exact ? Cx_[static_cast<std::size_t>(n)].str() : shortest(Cf_[static_cast<std::size_t>(n)]);
}

BigInt E_exact_zero(int n, const std::vector<int>& degrees) {
  require(n >= 1, "E_exact_zero: n must be >= 1");
  require(!degrees.empty(), "E_exact_zero: degree list must be non-empty");
  BigInt sum = 0;
  for (int r : degrees) sum += r;
  return boost::multiprecision::pow(sum, static_cast<unsigned>(n)) +
         boost::multiprecision::pow(BigInt(degrees.size()), static_cast<unsigned>(n));
}

BigInt D_exact_zero_direct(int n, const std::vector<int>& degrees) {
  require(n >= 1, "D_exact_zero_direct: n must be >= 1");
  return ZeroCounter(degrees).D(n);
}

double D_word_potential_direct(int n, const std::vector<int>& degrees, const std::vector<double>& beta) {
  require(n >= 1, "D_word_potential_direct: n must be >= 1");
  require(degrees.size() == beta.size(), "D_word_potential_direct: one weight per letter required");
  long double total = 0.0L;
  for (auto p : divisors(n)) {
    const auto m = static_cast<int>(n / p);
    for (auto e : divisors(m)) {
      const int mu = mobius(m / e);
      if (mu == 0) continue;
      total += mu * (weighted_P(degrees, beta, static_cast<int>(p), static_cast<int>(e), m) +
                     weighted_P(degrees, beta, static_cast<int>(p), 0, m));
    }
  }
  const double out = static_cast<double>(total);
  if (!std::isfinite(out)) {
    fail(ErrorKind::EnumerationCapExceeded, "D(" + std::to_string(n) + ") overflows double precision");
  }
  return out;
}

GrowthModel word_growth_model(const std::vector<int>& degrees, const Potential& f) {
  GrowthModel m;
  double weight = 1.0;
  switch (f.kind()) {
    case Potential::Kind::Zero:
      break;
    case Potential::Kind::Constant:
      weight = std::exp(f.c());
      break;
    case Potential::Kind::SymbolWeight: {
      const auto& b = f.beta();
      if (std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) != b.end()) return m;
      weight = std::exp(b.front());
      break;
    }
    default:
      return m;
  }
  const double base = std::accumulate(degrees.begin(), degrees.end(), 0.0);
  const double minor = static_cast<double>(degrees.size());
  if (!(minor < base)) return m;
  m.available = true;
  m.base = base;
  m.minor = minor;
  m.weight = weight;
  m.valid_from = 1;
  m.source = "periodic point formula";
  return m;
}

CountTable build_exact_table(const std::vector<int>& degrees, int n_max) {
  require(n_max >= 1, "build_exact_table: n_max must be >= 1");
  ZeroCounter counter(degrees);
  std::vector<BigInt> E(static_cast<std::size_t>(n_max) + 1, 0), D(static_cast<std::size_t>(n_max) + 1, 0);
  for (int n = 1; n <= n_max; ++n) {
    E[static_cast<std::size_t>(n)] = E_exact_zero(n, degrees);
    D[static_cast<std::size_t>(n)] = counter.D(n);
  }
  auto table = CountTable::exact(std::move(E), std::move(D));
  table.potential = "zero";
  table.source = "closed formula (E), primitive word count (D)";
  table.degrees = degrees;
  table.model = word_growth_model(degrees, Potential::zero());
  return table;
}

CountTable build_word_potential_table(const std::vector<int>& degrees, const Potential& f, int n_max) {
  require(n_max >= 1, "build_word_potential_table: n_max must be >= 1");
  std::vector<double> beta(degrees.size(), 0.0);
  switch (f.kind()) {
    case Potential::Kind::Zero:
      break;
    case Potential::Kind::Constant:
      std::fill(beta.begin(), beta.end(), f.c());
      break;
    case Potential::Kind::SymbolWeight:
      require(f.beta().size() == degrees.size(), "SymbolWeight potential needs one weight per map");
      beta = f.beta();
      break;
    default:
      fail(ErrorKind::InvalidArgument, "potential " + f.name() + " depends on the fiber; use enumeration");
  }
  std::vector<double> E(static_cast<std::size_t>(n_max) + 1, 0.0), D(E.size(), 0.0);
  for (int n = 1; n <= n_max; ++n) D[static_cast<std::size_t>(n)] = D_word_potential_direct(n, degrees, beta);
  for (int n = 1; n <= n_max; ++n) {
    CompensatedSum s;
    for (auto d : divisors(n)) s.add(D[static_cast<std::size_t>(d)]);
    E[static_cast<std::size_t>(n)] = s.value();
  }
  auto table = CountTable::floating(std::move(E), std::move(D));
  table.potential = f.name();
  table.source = "primitive word count";
  table.degrees = degrees;
  table.model = word_growth_model(degrees, f);
  return table;
}

CountTable build_enumerated_table(const SkewSystem& system, const Potential& f, int n_max, FiberFilter filter) {
  require(n_max >= 1, "build_enumerated_table: n_max must be >= 1");
  std::vector<double> E(static_cast<std::size_t>(n_max) + 1, 0.0), D(E.size(), 0.0);
  int undefined = 0;
  int nonrepelling_cycles = 0;
  int longest_nonrepelling = 0;
  for (int n = 1; n <= n_max; ++n) {
    CompensatedSum e_sum, d_sum;
    int nonrepelling_points = 0;
    for (const auto& p : periodic_points(system, n, &f)) {
      if (filter == FiberFilter::Julia) {
        bool keep = false;
        try {
          keep = std::abs(multiplier(system, p.word, p.z)) >= 1.0 - 1e-6;
          if (!keep && p.prime_period == n) nonrepelling_points += p.multiplicity;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::MultiplierUndefined) throw;
          ++undefined;
        }
        if (!keep) continue;
      }
      const double w = p.multiplicity * std::exp(p.weight_exponent);
      e_sum.add(w);
      if (p.prime_period == n) d_sum.add(w);
    }
    E[static_cast<std::size_t>(n)] = e_sum.value();
    D[static_cast<std::size_t>(n)] = d_sum.value();
    if (nonrepelling_points > 0) {
      nonrepelling_cycles += nonrepelling_points / n;
      longest_nonrepelling = n;
    }
  }
  auto table = CountTable::floating(std::move(E), std::move(D));
  table.potential = f.name();
  table.source = "root-finding enumeration";
  table.fiber_filter = filter == FiberFilter::Julia ? "julia" : "all";
  table.degrees = system.degrees();
  table.undefined_points = undefined;
  if (filter == FiberFilter::All) {
    if (f.word_only()) table.model = word_growth_model(table.degrees, f);
    return table;
  }
  // On the Julia set of a single map every periodic point is repelling once
  // all 2r - 2 non-repelling cycles are accounted for; the count then agrees
  // with the full-sphere formula for longer periods.
  const auto& R = system.map(1);
  if (system.alphabet_size() == 1 && R.degree() >= 2 && R.denominator().degree() == 0) {
    ++nonrepelling_cycles;  // superattracting fixed point at infinity
    longest_nonrepelling = std::max(longest_nonrepelling, 1);
  }
  const bool complete = system.alphabet_size() == 1 && nonrepelling_cycles == 2 * R.degree() - 2;
  if (complete && (f.kind() == Potential::Kind::Zero || f.kind() == Potential::Kind::Constant)) {
    table.model = word_growth_model(table.degrees, f);
    table.model.valid_from = longest_nonrepelling + 1;
    table.model.source = "all non-repelling cycles found up to period " + std::to_string(longest_nonrepelling);
  }
  return table;
}

BigInt C_mobius(const std::map<int, BigInt>& E, int n) {
  require(n >= 1, "C_mobius: n must be >= 1");
  BigInt acc = 0;
  for (auto d : divisors(n)) {
    const auto it = E.find(static_cast<int>(d));
    if (it == E.end()) fail(ErrorKind::MissingDivisorData, "C_mobius: E(" + std::to_string(d) + ") is missing");
    const int mu = mobius(n / d);
    if (mu > 0) acc += it->second;
    if (mu < 0) acc -= it->second;
  }
  if (acc % n != 0) {
    fail(ErrorKind::Inconsistent, "C_mobius: inversion sum for n = " + std::to_string(n) + " is not divisible by n");
  }
  return acc / n;
}

double C_mobius(const std::map<int, double>& E, int n) {
  require(n >= 1, "C_mobius: n must be >= 1");
  CompensatedSum acc;
  for (auto d : divisors(n)) {
    const auto it = E.find(static_cast<int>(d));
    if (it == E.end()) fail(ErrorKind::MissingDivisorData, "C_mobius: E(" + std::to_string(d) + ") is missing");
    acc.add(mobius(n / d) * it->second);
  }
  return acc.value() / n;
}

BigInt C_mobius_exact(const CountTable& table, int n) {
  std::map<int, BigInt> E;
  for (auto d : divisors(n)) {
    if (d <= table.n_max()) E.emplace(static_cast<int>(d), table.E_exact(static_cast<int>(d)));
  }
  return C_mobius(E, n);
}

double C_mobius_floating(const CountTable& table, int n) {
  std::map<int, double> E;
  for (auto d : divisors(n)) {
    if (d <= table.n_max()) E.emplace(static_cast<int>(d), table.E(static_cast<int>(d)));
  }
  return C_mobius(E, n);
}

int convolution_failure(const CountTable& table, int N) {
  require_table_range(table, N, "convolution check");
  for (int n = 1; n <= N; ++n) {
    if (table.mode() == CountMode::Exact) {
      BigInt s = 0;
      for (auto d : divisors(n)) s += d * table.C_exact(static_cast<int>(d));
      if (s != table.E_exact(n)) return n;
    } else {
      CompensatedSum s;
      for (auto d : divisors(n)) s.add(static_cast<double>(d) * table.C(static_cast<int>(d)));
      const double e = table.E(n);
      if (std::abs(s.value() - e) > 1e-9 * std::max(std::abs(e), 1e-300)) return n;
    }
  }
  return 0;
}

double pi_S(const CountTable& table, int N) {
  require_table_range(table, N, "pi_S");
  if (table.mode() == CountMode::Exact) return pi_S_exact(table, N).convert_to<double>();
  CompensatedSum s;
  for (int n = 1; n <= N; ++n) s.add(table.C(n));
  return s.value();
}

BigInt pi_S_exact(const CountTable& table, int N) {
  require_table_range(table, N, "pi_S");
  BigInt s = 0;
  for (int n = 1; n <= N; ++n) s += table.C_exact(n);
  return s;
}

double mertens_sum(const CountTable& table, double lambda, int N) {
  require_lambda(lambda, "mertens_sum");
  require_table_range(table, N, "mertens_sum");
  CompensatedSum s;
  for (int n = 1; n <= N; ++n) s.add(table.C_over_power(n, lambda));
  return s.value();
}

constexpr int kModelTermCap = 100000;

SeriesValue meissel_sum(const CountTable& table, double lambda, double k, double tail_tol) {
  require(k > 0.0 && std::isfinite(k), "meissel_sum: k must be positive");
  require(tail_tol > 0.0, "meissel_sum: tail tolerance must be positive");
  require_lambda(lambda, "meissel_sum");
  const auto& model = table.model;
  const bool use_model = model.available && std::abs(lambda / model.lambda() - 1.0) <= 1e-12;

  Truncation trunc;
  if (use_model) {
    const double b = model.base;
    const double q = model.minor / b;
    const double c = 2.0 * b / (b - 1.0);
    auto bound = [&](int N) {
      const double m = static_cast<double>(N + 1);
      return std::pow(m, -k - 1.0) * (std::pow(q, m) / (1.0 - q) + c * std::pow(b, -0.5 * m) / (1.0 - 1.0 / std::sqrt(b)));
    };
    // past the table end the model supplies C(n)/lambda^n itself
    int N = std::max(1, model.valid_from - 1);
    while (bound(N) > tail_tol && N < kModelTermCap) ++N;
    if (bound(N) > tail_tol || (N > table.n_max() && table.n_max() < model.valid_from - 1)) {
      std::ostringstream msg;
      msg << "meissel_sum: tail bound " << bound(N) << " above " << tail_tol << " at n = " << N;
      fail(ErrorKind::TailNotCertifiable, msg.str());
    }
    trunc.terms = N;
    trunc.tail_estimate = zeta_tail(k + 1.0, N + 1);
    trunc.tail_bound = bound(N) + 1e-14 * trunc.tail_estimate;
    trunc.method = "growth model: Hurwitz zeta tail plus remainder bound (" + model.source + ")";
    if (N > table.n_max()) trunc.method += "; terms past the table end from the model";
  } else {
    double kappa = 0.0;
    for (int n = 1; n <= table.n_max(); ++n) kappa = std::max(kappa, table.E_over_power(n, lambda));
    const double K = kappa * lambda / (lambda - 1.0);
    // K N^-k / k <= tol  <=>  N >= (K / (k tol))^(1/k)
    const double need = std::ceil(std::pow(K / (k * tail_tol), 1.0 / k));
    if (!(need <= table.n_max())) {
      std::ostringstream msg;
      msg << "meissel_sum: integral tail bound needs N >= " << need << " but the table ends at " << table.n_max();
      fail(ErrorKind::TailNotCertifiable, msg.str());
    }
    int N = std::max(1, static_cast<int>(need));
    while (N > 1 && K * std::pow(N - 1, -k) / k <= tail_tol) --N;
    trunc.terms = N;
    trunc.tail_bound = K * std::pow(N, -k) / k;
    trunc.method = "integral comparison with K = max E(n)/lambda^n * lambda/(lambda-1) from the table";
  }
  CompensatedSum s;
  for (int n = 1; n <= trunc.terms; ++n) {
    const double c = n <= table.n_max() ? table.C_over_power(n, lambda) : model.scaled_count(n);
    s.add(c * std::pow(n, -k));
  }
  s.add(trunc.tail_estimate);

  SeriesValue v;
  v.kind = SeriesKind::Meissel;
  v.N = trunc.terms;
  v.k = k;
  v.value = s.value();
  v.truncation = trunc;
  return v;
}

DirichletPartial dirichlet_partial(const CountTable& table, double lambda, std::complex<double> z, int N) {
  require_lambda(lambda, "dirichlet_partial");
  require(N >= 1, "dirichlet_partial: N must be >= 1");
  require_table_range(table, N, "dirichlet_partial");
  ZetaOptions zo;
  zo.margin = 0.0;
  const auto zeta_z = zeta(z, 1e-12, zo);
  CompensatedComplexSum lhs, rhs;
  for (int n = 1; n <= N; ++n) {
    const double shift = std::pow(lambda, n - N);
    const std::complex<double> n_z = std::exp(z * std::log(static_cast<double>(n)));
    lhs.add(table.C_over_power(n, lambda) * shift / n_z);
    rhs.add(shift / (n_z * static_cast<double>(n)));
  }
  DirichletPartial out;
  out.N = N;
  out.z = z;
  out.lhs_scaled = lhs.value();
  out.rhs_scaled = rhs.value() / zeta_z.value;
  out.log_scale = N * std::log(lambda);
  out.zeta_error_bound = zeta_z.error_bound;
  out.convolution_checked_to = N;
  out.convolution_holds = convolution_failure(table, N) == 0;
  return out;
}

LogLinearFit fit_log_growth(const CountTable& table, int n_lo, int n_hi) {
  require(n_lo >= 1 && n_hi - n_lo + 1 >= 4, "fit: the range must span at least 4 values");
  require_table_range(table, n_hi, "fit");
  std::vector<double> x, y;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double ly = table.log_E(n);
    require(std::isfinite(ly), "fit: E(" + std::to_string(n) + ") must be positive");
    x.push_back(n);
    y.push_back(ly);
  }
  const double m = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LogLinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  fit.n_lo = n_lo;
  fit.n_hi = n_hi;
  return fit;
}

LambdaEstimate lambda_estimate(const CountTable& table, int n_lo, int n_hi, double residual_ceiling) {
  LambdaEstimate est;
  est.fit = fit_log_growth(table, n_lo, n_hi);
  est.lambda = std::exp(est.fit.slope);
  std::ostringstream msg;
  if (est.fit.residual > residual_ceiling) {
    msg << "lambda_estimate: fit residual " << est.fit.residual << " exceeds " << residual_ceiling;
    fail(ErrorKind::HypothesisImplausible, msg.str());
  }
  if (!(est.lambda > 1.0 + 1e-9)) {
    msg << "lambda_estimate: estimated growth rate " << est.lambda << " is not above 1";
    fail(ErrorKind::HypothesisImplausible, msg.str());
  }
  return est;
}

double radius_estimate(const CountTable& table, int n_lo, int n_hi) {
  return std::exp(-fit_log_growth(table, n_lo, n_hi).slope);
}

SeriesValue rho_series(const CountTable& table, std::complex<double> z, double lambda_hat) {
  require(lambda_hat > 0.0 && std::isfinite(lambda_hat), "rho_series: lambda estimate must be positive");
  const double r = std::abs(z) * lambda_hat;
  if (r >= 0.99) {
    std::ostringstream msg;
    msg << "rho_series: |z| * lambda = " << r << " is not below 0.99";
    fail(ErrorKind::OutsideRadius, msg.str());
  }
  SeriesValue v;
  v.kind = SeriesKind::RhoSeries;
  v.z = z;
  v.N = table.n_max();
  Truncation trunc;
  trunc.terms = table.n_max();
  trunc.method = "ratio bound from the last ten table entries";
  if (z == std::complex<double>{}) {
    v.value = 0.0;
    v.truncation = trunc;
    return v;
  }
  CompensatedComplexSum s;
  std::complex<double> power = 1.0;
  const std::complex<double> step = z * lambda_hat;
  const int N = table.n_max();
  for (int n = 1; n <= N; ++n) {
    power *= step;
    s.add(table.E_over_power(n, lambda_hat) * power / static_cast<double>(n));
  }
  // Later terms grow at most by the largest recent ratio E(n)/E(n-1).
  double q = 0.0;
  for (int n = std::max(2, N - 9); n <= N; ++n)
    q = std::max(q, lambda_hat * table.E_over_power(n, lambda_hat) / table.E_over_power(n - 1, lambda_hat));
  const double qz = q * std::abs(z);
  if (N < 2 || qz >= 1.0) {
    trunc.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    const double last = table.E_over_power(N, lambda_hat) * std::pow(r, N);
    trunc.tail_bound = last * qz / ((N + 1.0) * (1.0 - qz));
  }
  v.value = s.value();
  v.truncation = trunc;
  return v;
}

}  // namespace skewcount
