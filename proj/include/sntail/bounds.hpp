// SPDX-License-Identifier: Apache-2.0
//
// Non-asymptotic envelopes for the right tail: quadratic minorant and
// majorant of g(1) - g(v) on the unit ball around 1, and the resulting
// upper and lower bounds on the tail integral.
#pragma once

#include <string>
#include <vector>

#include "sntail/density.hpp"
#include "sntail/optimize.hpp"
#include "sntail/oracles.hpp"

namespace sntail::bounds {

struct Curvature {
  double lambda = 0.0;  ///< inf of (g(1) - g(v)) / |v - 1|^2 over the punctured unit ball
  double mu = 0.0;      ///< sup of the same ratio
  double search_inf = 0.0;  ///< extrema found away from the center
  double search_sup = 0.0;
  double half_eig_min = 0.0;  ///< limits of the ratio at the center
  double half_eig_max = 0.0;
  std::vector<double> lambda_argmin;
  std::vector<double> mu_argmax;
  std::size_t evaluations = 0;
  bool certified = false;
};

/// Radius of the excluded ball around v = 1; the ratio there is replaced by
/// its limit set [eig_min/2, eig_max/2].
inline constexpr double kPunctureRadius = 1e-6;

Curvature curvature_functionals(int n, double beta = 2.0, const optimize::Options& options = {});

struct BoundsCertificate {
  int n = 2;
  double beta = 2.0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double h_sup = 0.0;  ///< sup of prod |v(j)| h_paper(v) over |v - 1|^2 <= eps / lambda
  double g_inf = 0.0;  ///< inf over |v - 1|^2 <= eps / mu
  double upper = 0.0;
  double lower = 0.0;
  std::vector<double> h_argmax;
  std::vector<double> g_argmin;
  std::size_t evaluations = 0;
  bool certified = false;
};

/// Options for the envelope search; the objective carries a quadrature so
/// the grids are coarser than for the curvature search.
optimize::Options envelope_search_options();

/// Requires 0 < eps < min(lambda, mu), which keeps both balls inside the
/// unit ball where the quadratic envelopes hold.
BoundsCertificate envelope_bounds(const density::DensityModel& model, int n, double epsilon, double lambda,
                                  double mu, double beta = 2.0,
                                  const optimize::Options& options = envelope_search_options());

struct SandwichReport {
  BoundsCertificate certificate;
  oracles::OracleResult integral;  ///< paper-integrand region integral
  bool holds = false;
  bool region_inside_upper_ball = false;
  bool lower_ball_inside_region = false;
  std::string diagnostics;
};

/// lower <= region integral <= upper, with all three values. n <= 4.
SandwichReport validate_sandwich(const density::DensityModel& model, int n, double epsilon, double beta = 2.0);

}  // namespace sntail::bounds
