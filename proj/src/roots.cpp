#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "roots_impl.hpp"
#include "skewcount/error.hpp"

namespace skewcount {
namespace detail {
namespace {

double cauchy_radius_of(const std::vector<Complex>& a) {
  const std::size_t n = a.size() - 1;
  const double log_lead = std::log(std::abs(a[n]));
  std::vector<std::pair<double, double>> terms;  // (log|a_i|, i - n)
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != Complex{}) terms.emplace_back(std::log(std::abs(a[i])), double(i) - double(n));
  }
  if (terms.empty()) return 0.0;
  // phi(t) = log sum |a_i| e^{(i-n) t} - log|a_n|, strictly decreasing in t.
  auto phi = [&](double t) {
    double peak = -INFINITY;
    for (const auto& [la, e] : terms) peak = std::max(peak, la + e * t);
    double s = 0.0;
    for (const auto& [la, e] : terms) s += std::exp(la + e * t - peak);
    return peak + std::log(s) - log_lead;
  };
  double hi = 0.0;
  for (const auto& [la, e] : terms) hi = std::max(hi, la - log_lead);
  hi = std::log1p(std::exp(hi)) + 1e-12;
  double lo = hi - 1.0;
  while (phi(lo) < 0.0) lo -= 2.0 * (hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

struct AberthResult {
  std::vector<Complex> z;
  int iterations = 0;
};

AberthResult aberth(const std::vector<Complex>& a, const RootOptions& options) {
  const std::size_t n = a.size() - 1;
  AberthResult out;
  if (n == 1) {
    out.z = {-a[0] / a[1]};
    return out;
  }
  const double radius = cauchy_radius_of(a);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(0.0, std::numbers::pi / double(n));
  out.z.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * double(k) / double(n) + 0.25 + jitter(rng);
    out.z[k] = std::polar(radius, angle);
  }

  const double noise = 2.0 * double(n + 1) * DBL_EPSILON;
  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  int iteration = 0;
  while (remaining > 0 && iteration < options.max_iterations) {
    ++iteration;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto step = newton_step(a, out.z[i]);
      if (step.relative_residual <= noise) {
        done[i] = true;
        --remaining;
        continue;
      }
      if (step.derivative_vanishes) {
        out.z[i] *= Complex(1.0 + 1e-7, 1e-7);
        continue;
      }
      Complex repulsion{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Complex diff = out.z[i] - out.z[j];
        if (diff != Complex{}) repulsion += 1.0 / diff;
      }
      const Complex correction = step.ratio / (1.0 - step.ratio * repulsion);
      out.z[i] -= correction;
      if (std::abs(correction) <= DBL_EPSILON * std::abs(out.z[i])) {
        done[i] = true;
        --remaining;
      }
    }
  }
  out.iterations = iteration;
  return out;
}

template <class C>
typename ScalarTraits<C>::Real unit_roundoff() {
  using Real = typename ScalarTraits<C>::Real;
  return std::numeric_limits<Real>::epsilon();
}

template <class C>
C newton_polish(const std::vector<C>& a, C z, int max_steps) {
  using Real = typename ScalarTraits<C>::Real;
  auto step = newton_step(a, z);
  for (int it = 0; it < max_steps && !step.derivative_vanishes; ++it) {
    const C candidate = z - step.ratio;
    const auto next = newton_step(a, candidate);
    if (!(next.relative_residual <= step.relative_residual)) break;
    const Real moved = magnitude(step.ratio);
    z = candidate;
    step = next;
    if (moved <= unit_roundoff<C>() * magnitude(z)) break;
  }
  return z;
}

/// Newton on the (k-1)-th derivative from the centroid of k approximations;
/// accepted only if every derivative below k vanishes there to working
/// precision.
template <class C>
bool refine_multiple(const std::vector<C>& a, std::vector<C>& members, double threshold) {
  const std::size_t k = members.size();
  std::vector<std::vector<C>> derivs{a};
  for (std::size_t j = 1; j < k; ++j) derivs.push_back(poly_derivative(derivs.back()));
  if (derivs.back().size() < 2) return false;
  C centroid(0);
  for (const auto& m : members) centroid += m;
  centroid /= C(static_cast<double>(k));
  const C c = newton_polish(derivs.back(), centroid, 30);
  for (std::size_t j = 0; j < k; ++j) {
    if (ScalarTraits<C>::to_double(relative_residual(derivs[j], c)) > threshold) return false;
  }
  for (auto& m : members) m = c;
  return true;
}

/// Single-linkage groups of points within radius * max(1, |z|).
std::vector<std::vector<std::size_t>> link_groups(const std::vector<Complex>& z, double radius) {
  const std::size_t n = z.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return z[x].real() < z[y].real() || (z[x].real() == z[y].real() && x < y);
  });
  double max_scale = 1.0;
  for (const auto& v : z) max_scale = std::max(max_scale, std::abs(v));
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    for (std::size_t q = p + 1; q < n; ++q) {
      const std::size_t j = order[q];
      if (z[j].real() - z[i].real() > radius * max_scale) break;
      const double scale = std::max({1.0, std::abs(z[i]), std::abs(z[j])});
      if (std::abs(z[i] - z[j]) <= radius * scale) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return groups;
}

}  // namespace

template <class C>
RootReport find_roots_in(const std::vector<C>& coefficients, const RootOptions& options) {
  using Traits = ScalarTraits<C>;
  std::vector<C> full = coefficients;
  trim_exact_zeros(full);
  if (full.size() < 2) fail(ErrorKind::InvalidArgument, "find_roots: degree must be >= 1");
  require(options.cluster_tol > 0.0, "find_roots: cluster tolerance must be positive");

  std::size_t zero_mult = 0;
  while (full[zero_mult] == C(0)) ++zero_mult;
  const std::vector<C> stripped(full.begin() + static_cast<long>(zero_mult), full.end());

  RootReport report;
  std::vector<C> approx;
  if (stripped.size() >= 2) {
    std::vector<Complex> as_double(stripped.size());
    for (std::size_t i = 0; i < stripped.size(); ++i) as_double[i] = Traits::to_complex_double(stripped[i]);
    auto ab = aberth(as_double, options);
    report.iterations = ab.iterations;

    const double multiple_threshold = std::is_same_v<C, Complex> ? 1e-12 : 1e-28;
    for (const auto& group : link_groups(ab.z, options.multiple_root_radius)) {
      std::vector<C> members;
      for (auto i : group) members.push_back(Traits::from(ab.z[i]));
      if (members.size() < 2 || !refine_multiple(stripped, members, multiple_threshold)) {
        for (auto& m : members) m = newton_polish(stripped, m, 8);
      }
      approx.insert(approx.end(), members.begin(), members.end());
    }
  }
  for (std::size_t i = 0; i < zero_mult; ++i) approx.push_back(C(0));

  std::vector<Complex> values(approx.size());
  for (std::size_t i = 0; i < approx.size(); ++i) values[i] = Traits::to_complex_double(approx[i]);
  for (const auto& group : link_groups(values, options.cluster_tol)) {
    C centroid(0);
    for (auto i : group) centroid += approx[i];
    centroid /= C(static_cast<double>(group.size()));
    double residual = Traits::to_double(relative_residual(full, centroid));
    // A cluster of k must also annihilate the first k-1 derivatives, otherwise
    // several approximations collapsed onto one simple root.
    std::vector<C> deriv = full;
    for (std::size_t j = 1; j < group.size(); ++j) {
      deriv = poly_derivative(deriv);
      residual = std::max(residual, Traits::to_double(relative_residual(deriv, centroid)));
    }
    report.max_residual = std::max(report.max_residual, residual);
    report.roots.push_back({Traits::to_complex_double(centroid), static_cast<int>(group.size())});
  }
  std::sort(report.roots.begin(), report.roots.end(), [](const Root& x, const Root& y) {
    return x.value.real() < y.value.real() ||
           (x.value.real() == y.value.real() && x.value.imag() < y.value.imag());
  });
  if (!(report.max_residual <= options.residual_ceiling)) {
    std::ostringstream msg;
    msg << "find_roots: degree " << full.size() - 1 << ", max relative residual "
        << report.max_residual << " exceeds ceiling " << options.residual_ceiling << " after "
        << report.iterations << " iterations";
    fail(ErrorKind::NoConvergence, msg.str());
  }
  return report;
}

template RootReport find_roots_in<Complex>(const std::vector<Complex>&, const RootOptions&);
template RootReport find_roots_in<QuadComplex>(const std::vector<QuadComplex>&, const RootOptions&);

}  // namespace detail

RootReport find_roots(const ComplexPoly& F, const RootOptions& options) {
  return detail::find_roots_in(F.vec(), options);
}

double cauchy_radius(const ComplexPoly& F) {
  require(F.degree() >= 1, "cauchy_radius: degree must be >= 1");
  return detail::cauchy_radius_of(F.vec());
}

}  // namespace skewcount
