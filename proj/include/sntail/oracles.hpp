// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth tail computations that do not go through the asymptotic
// formulas: the exact sphere-projection tail, region quadrature of the
// ray-decomposed tail integral, and enumeration for the discrete examples.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sntail/asymptotics.hpp"
#include "sntail/density.hpp"

namespace sntail::oracles {

enum class Method { sphere_exact, region_quadrature, enumeration };

struct OracleResult {
  double value = 0.0;
  Method method = Method::sphere_exact;
  double error_estimate = 0.0;
  int n = 0;
  double epsilon = 0.0;
  double beta = 2.0;
  std::string integrand;  ///< region quadrature only
  /// Extent of the integration region around 1, region quadrature only.
  double min_boundary_radius = 0.0;
  double max_boundary_radius = 0.0;
};

/// P(T(n) > t) for a spherically symmetric vector:
/// 1/2 I_{1-t^2/n}((n-1)/2, 1/2) for t >= 0, by symmetry for t < 0.
OracleResult sphere_tail_exact(int n, double threshold);

/// P(T(n) > sqrt(n) - eps) with 1 - t^2/n formed as eps (2 sqrt(n) - eps) / n,
/// free of cancellation for small eps.
OracleResult sphere_tail_near_max(int n, double epsilon);

enum class RegionIntegrand {
  paper,     ///< prod_j v(j) * h_paper(v)
  weighted,  ///< Jacobian-weighted profile, plus the mirror branch for left tails
};

struct RegionOptions {
  double rel_tol = 1e-8;
  density::ProfileOptions profile{{1e-300, 1e-11, 4000}, 1e-16};
};

/// Integral of the chosen integrand over {v : g_beta(v) > n^{1-1/beta} - eps},
/// in polar coordinates about v = 1 (the region is convex, so each ray leaves
/// it once). n in {2, 3, 4}; the `paper` integrand supports the right tail only.
OracleResult region_tail_integral(const density::DensityModel& model, int n, double epsilon, double beta,
                                  RegionIntegrand integrand,
                                  asymptotics::Side side = asymptotics::Side::right,
                                  const RegionOptions& options = {});

/// P(T(n) > sqrt(n) - eps) for Rademacher signs by enumerating all 2^n
/// vectors; eps must lie in (0, 1/(2 sqrt(n))). n <= 24.
OracleResult rademacher_tail_exact(int n, double epsilon);

/// P(T(n) > threshold) for Rademacher signs by enumeration, any threshold.
OracleResult rademacher_tail_enumerate(int n, double threshold);

/// xi(1) = 0 and the rest iid standard normal: P(T(n) > sqrt(n) - eps),
/// reduced to the exact sphere tail in dimension n - 1. n >= 3.
OracleResult degenerate_component_check(int n, double epsilon);

struct CoefficientFit {
  double coefficient = 0.0;
  double exponent = 0.0;
  double residual = 0.0;    ///< RMS of the log-residuals
  bool conforming = false;  ///< exponent within 1e-2 of (n - 1)/2
  std::vector<double> grid;
  std::vector<double> values;
};

/// Least-squares fit of log q = log c + e log eps over a strictly decreasing
/// grid of >= 4 positive values. Throws NonPowerLawError when a value is not
/// positive or the residual exceeds `residual_threshold`.
CoefficientFit leading_coeff_fit(const std::function<double(double)>& tail, int n,
                                 std::span<const double> grid, double residual_threshold = 0.05);

/// `count` geometrically spaced values from start to end inclusive.
std::vector<double> geometric_grid(double start, double end, int count);

const char* to_string(Method m);
const char* to_string(RegionIntegrand i);

}  // namespace sntail::oracles
