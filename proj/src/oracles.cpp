// SPDX-License-Identifier: Apache-2.0
#include "sntail/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "sntail/analytic.hpp"
#include "sntail/error.hpp"
#include "sntail/quadrature.hpp"
#include "sntail/special.hpp"

namespace sntail::oracles {
namespace {

constexpr int kMaxEnumerationN = 24;
constexpr double kMaxRayRadius = 1e6;

OracleResult sphere_from_complement(int n, double x_complement, double threshold_sign) {
  // P(U^2 > u^2) = I_{1-u^2}((n-1)/2, 1/2) for U^2 ~ Beta(1/2, (n-1)/2).
  const double upper = 0.5 * incomplete_beta(0.5 * (n - 1), 0.5, x_complement);
  OracleResult r;
  r.value = threshold_sign >= 0.0 ? upper : 1.0 - upper;
  r.method = Method::sphere_exact;
  r.error_estimate = 1e-14 * std::max(r.value, std::numeric_limits<double>::min());
  r.n = n;
  return r;
}

// Radius at which the ray 1 + r u leaves {criterion > level}.
double boundary_radius(std::span<const double> u, double beta, double level, std::vector<double>& work) {
  auto psi = [&](double r) {
    for (std::size_t j = 0; j < u.size(); ++j) work[j] = 1.0 + r * u[j];
    return analytic::criterion(work, beta) - level;
  };
  double lo = 0.0;
  double hi = 1e-3;
  while (psi(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxRayRadius) throw RegionError("region_tail_integral: region is unbounded along a ray");
  }
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      psi, lo, hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace

OracleResult sphere_tail_exact(int n, double threshold) {
  if (n < 2) throw DomainError("sphere_tail_exact: n must be >= 2");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (std::isnan(threshold)) throw DomainError("sphere_tail_exact: threshold is NaN");
  // |T| <= sqrt(n) always, so the tail is 0 or 1 beyond it.
  const double t = std::min(std::fabs(threshold), root_n);
  const double x = std::clamp((root_n - t) * (root_n + t) / n, 0.0, 1.0);
  OracleResult r = sphere_from_complement(n, x, threshold);
  return r;
}

OracleResult sphere_tail_near_max(int n, double epsilon) {
  if (n < 2) throw DomainError("sphere_tail_near_max: n must be >= 2");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (!(epsilon >= 0.0 && epsilon <= 2.0 * root_n))
    throw DomainError("sphere_tail_near_max: eps must lie in [0, 2 sqrt(n)]");
  if (epsilon > root_n) {
    OracleResult r = sphere_tail_exact(n, root_n - epsilon);
    r.epsilon = epsilon;
    return r;
  }
  const double x = std::min(1.0, epsilon * (2.0 * root_n - epsilon) / n);
  OracleResult r = sphere_from_complement(n, x, 1.0);
  r.epsilon = epsilon;
  return r;
}

OracleResult region_tail_integral(const density::DensityModel& model, int n, double epsilon, double beta,
                                  RegionIntegrand integrand, asymptotics::Side side,
                                  const RegionOptions& options) {
  if (n < 2 || n > 4) throw DomainError("region_tail_integral: n must be 2, 3 or 4");
  if (model.dimension() != n) throw DomainError("region_tail_integral: model dimension differs from n");
  if (!(beta > 1.0)) throw DomainError("region_tail_integral: beta must be > 1");
  if (!(epsilon > 0.0)) throw DomainError("region_tail_integral: eps must be positive");
  if (integrand == RegionIntegrand::paper && side != asymptotics::Side::right)
    throw DomainError("region_tail_integral: the paper-variant integrand is defined for the right tail only");
  if (side != asymptotics::Side::right && beta != 2.0)
    throw DomainError("region_tail_integral: left and two-sided tails need beta == 2");
  const double top = analytic::criterion_max(n, beta);
  // Along a ray to infinity the criterion tends to at most (n-1)^{1-1/beta}.
  if (!(epsilon < top - analytic::criterion_max(n - 1, beta)))
    throw RegionError("region_tail_integral: eps too large, the region {g > max - eps} is unbounded");
  const double level = top - epsilon;
  const int d = n - 1;

  density::ProfileOptions profile = options.profile;
  std::vector<double> point(static_cast<std::size_t>(d));
  auto value_at = [&](std::span<const double> v) -> double {
    std::vector<double> vv(v.begin(), v.end());
    switch (integrand) {
      case RegionIntegrand::paper: {
        double prod = 1.0;
        for (double x : vv) prod *= x;
        return prod * density::h_profile(model, {vv, density::ProfileVariant::paper}, profile);
      }
      case RegionIntegrand::weighted: {
        double total = 0.0;
        if (side != asymptotics::Side::left)
          total += density::h_profile(model, {vv, density::ProfileVariant::weighted}, profile);
        if (side != asymptotics::Side::right)
          total += density::h_profile(model, {vv, density::ProfileVariant::mirror}, profile);
        return total;
      }
    }
    return 0.0;
  };

  QuadratureOptions inner{1e-300, options.rel_tol * 1e-2, 4000};
  QuadratureOptions middle{1e-300, options.rel_tol * 1e-1, 4000};
  QuadratureOptions outer{1e-300, options.rel_tol, 4000};

  double min_radius = std::numeric_limits<double>::infinity();
  double max_radius = 0.0;
  std::vector<double> work(static_cast<std::size_t>(d));
  std::vector<double> u(static_cast<std::size_t>(d));

  // Integral along the ray in direction u, with the r^{d-1} polar weight.
  auto ray_integral = [&](std::span<const double> dir) {
    const double r_star = boundary_radius(dir, beta, level, work);
    min_radius = std::min(min_radius, r_star);
    max_radius = std::max(max_radius, r_star);
    auto f = [&](double r) {
      for (std::size_t j = 0; j < dir.size(); ++j) point[j] = 1.0 + r * dir[j];
      return value_at(point) * std::pow(r, d - 1);
    };
    return integrate(f, 0.0, r_star, inner).value;
  };

  QuadratureResult total;
  if (d == 1) {
    u[0] = 1.0;
    const double plus = ray_integral(u);
    u[0] = -1.0;
    const double minus = ray_integral(u);
    total.value = plus + minus;
    total.error = options.rel_tol * 1e-2 * total.value;
  } else if (d == 2) {
    auto over_angle = [&](double theta) {
      u[0] = std::cos(theta);
      u[1] = std::sin(theta);
      return ray_integral(u);
    };
    total = integrate(over_angle, 0.0, 2.0 * std::numbers::pi, outer);
  } else {
    auto over_polar = [&](double phi) {
      const double s = std::sin(phi);
      const double c = std::cos(phi);
      auto over_azimuth = [&](double theta) {
        u[0] = s * std::cos(theta);
        u[1] = s * std::sin(theta);
        u[2] = c;
        return ray_integral(u);
      };
      return s * integrate(over_azimuth, 0.0, 2.0 * std::numbers::pi, middle).value;
    };
    total = integrate(over_polar, 0.0, std::numbers::pi, outer);
  }

  OracleResult r;
  r.value = total.value;
  r.method = Method::region_quadrature;
  r.error_estimate = total.error + options.rel_tol * 1e-1 * std::fabs(total.value);
  r.n = n;
  r.epsilon = epsilon;
  r.beta = beta;
  r.integrand = to_string(integrand);
  r.min_boundary_radius = min_radius;
  r.max_boundary_radius = max_radius;
  return r;
}

OracleResult rademacher_tail_enumerate(int n, double threshold) {
  if (n < 1 || n > kMaxEnumerationN)
    throw DomainError("rademacher enumeration: n must lie in [1, 24]");
  const double root_n = std::sqrt(static_cast<double>(n));
  const std::uint32_t count = std::uint32_t{1} << n;
  std::uint64_t hits = 0;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    const int plus = std::popcount(mask);
    const double t = (2.0 * plus - n) / root_n;
    if (t > threshold) ++hits;
  }
  OracleResult r;
  r.value = static_cast<double>(hits) / static_cast<double>(count);
  r.method = Method::enumeration;
  r.n = n;
  r.epsilon = root_n - threshold;
  return r;
}

OracleResult rademacher_tail_exact(int n, double epsilon) {
  if (n < 1 || n > kMaxEnumerationN)
    throw DomainError("rademacher_tail_exact: n must lie in [1, 24]");
  const double window = 0.5 / std::sqrt(static_cast<double>(n));
  if (!(epsilon > 0.0 && epsilon < window))
    throw DomainError("rademacher_tail_exact: eps must lie in (0, 1/(2 sqrt(n)))");
  OracleResult r = rademacher_tail_enumerate(n, std::sqrt(static_cast<double>(n)) - epsilon);
  r.epsilon = epsilon;
  return r;
}

OracleResult degenerate_component_check(int n, double epsilon) {
  if (n < 3) throw DomainError("degenerate_component_check: n must be >= 3");
  if (!(epsilon > 0.0)) throw DomainError("degenerate_component_check: eps must be positive");
  const double threshold = std::sqrt(static_cast<double>(n)) - epsilon;
  OracleResult r;
  if (threshold >= std::sqrt(static_cast<double>(n - 1))) {
    r.value = 0.0;
    r.method = Method::sphere_exact;
  } else {
    r = sphere_tail_exact(n - 1, threshold);
  }
  r.n = n;
  r.epsilon = epsilon;
  return r;
}

CoefficientFit leading_coeff_fit(const std::function<double(double)>& tail, int n,
                                 std::span<const double> grid, double residual_threshold) {
  if (grid.size() < 4) throw DomainError("leading_coeff_fit: need at least 4 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("leading_coeff_fit: grid must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1])) throw DomainError("leading_coeff_fit: grid must decrease");
  }
  CoefficientFit fit;
  fit.grid.assign(grid.begin(), grid.end());
  std::vector<double> xs;
  std::vector<double> ys;
  for (double eps : grid) {
    const double q = tail(eps);
    fit.values.push_back(q);
    if (!(q > 0.0) || !std::isfinite(q))
      throw NonPowerLawError("leading_coeff_fit: non-positive tail value at eps = " + std::to_string(eps));
    xs.push_back(std::log(eps));
    ys.push_back(std::log(q));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.exponent = sxy / sxx;
  const double log_c = my - fit.exponent * mx;
  fit.coefficient = std::exp(log_c);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (log_c + fit.exponent * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  fit.conforming = std::fabs(fit.exponent - 0.5 * (n - 1)) <= 1e-2;
  if (!(fit.residual <= residual_threshold))
    throw NonPowerLawError("leading_coeff_fit: residual " + std::to_string(fit.residual) +
                           " exceeds threshold");
  return fit;
}

std::vector<double> geometric_grid(double start, double end, int count) {
  if (count < 2 || !(start > 0.0) || !(end > 0.0)) throw DomainError("geometric_grid: invalid spec");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double ls = std::log(start);
  const double le = std::log(end);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(ls + (le - ls) * i / (count - 1));
  out.front() = start;
  out.back() = end;
  return out;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::sphere_exact: return "sphere-exact";
    case Method::region_quadrature: return "region-quadrature";
    case Method::enumeration: return "enumeration";
  }
  return "?";
}

const char* to_string(RegionIntegrand i) { return i == RegionIntegrand::paper ? "paper" : "weighted"; }

}  // namespace sntail::oracles
