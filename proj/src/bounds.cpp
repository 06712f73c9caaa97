// SPDX-License-Identifier: Apache-2.0
#include "sntail/bounds.hpp"

#include <cmath>
#include <sstream>

#include "sntail/analytic.hpp"
#include "sntail/error.hpp"
#include "sntail/special.hpp"

namespace sntail::bounds {

Curvature curvature_functionals(int n, double beta, const optimize::Options& options) {
  const analytic::AntiHessianSpec spec{n, beta};
  spec.validate();
  if (n - 1 > 8) throw DomainError("curvature_functionals: supported for n <= 9");
  const double top = analytic::criterion_max(n, beta);
  const optimize::Ball ball{std::vector<double>(static_cast<std::size_t>(n - 1), 1.0), 1.0, kPunctureRadius};
  const optimize::Objective ratio = [&](std::span<const double> v) {
    double dist2 = 0.0;
    for (double x : v) dist2 += (x - 1.0) * (x - 1.0);
    return (top - analytic::criterion(v, beta)) / dist2;
  };
  const auto low = optimize::optimize_on_ball(ratio, ball, optimize::Goal::minimize, options);
  const auto high = optimize::optimize_on_ball(ratio, ball, optimize::Goal::maximize, options);
  const auto [eig_min, eig_max] = analytic::anti_hessian_eigen_range(spec);

  Curvature c;
  c.search_inf = low.value;
  c.search_sup = high.value;
  c.half_eig_min = 0.5 * eig_min;
  c.half_eig_max = 0.5 * eig_max;
  c.lambda = std::min(low.value, c.half_eig_min);
  c.mu = std::max(high.value, c.half_eig_max);
  c.lambda_argmin = low.value <= c.half_eig_min ? low.argument : ball.center;
  c.mu_argmax = high.value >= c.half_eig_max ? high.argument : ball.center;
  c.evaluations = low.evaluations + high.evaluations;
  c.certified = low.certified && high.certified;
  return c;
}

optimize::Options envelope_search_options() {
  optimize::Options o;
  o.grid_points_1d = 401;
  o.grid_points_2d = 101;
  o.grid_points_3d = 31;
  o.refine_candidates = 4;
  o.starts = 64;
  o.step_tolerance = 1e-8;
  return o;
}

BoundsCertificate envelope_bounds(const density::DensityModel& model, int n, double epsilon, double lambda,
                                  double mu, double beta, const optimize::Options& options) {
  if (model.dimension() != n) throw DomainError("envelope_bounds: model dimension differs from n");
  if (!(lambda > 0.0) || !(mu >= lambda)) throw DomainError("envelope_bounds: need 0 < lambda <= mu");
  if (!(epsilon > 0.0 && epsilon < lambda))
    throw DomainError("envelope_bounds: eps must lie in (0, lambda) = (0, " + std::to_string(lambda) + ")");

  const int d = n - 1;
  const optimize::Objective weight = [&](std::span<const double> v) {
    double prod = 1.0;
    for (double x : v) prod *= std::fabs(x);
    std::vector<double> vv(v.begin(), v.end());
    return prod * density::h_profile(model, {vv, density::ProfileVariant::paper});
  };
  const std::vector<double> ones(static_cast<std::size_t>(d), 1.0);
  const double upper_radius2 = epsilon / lambda;
  const double lower_radius2 = epsilon / mu;
  const auto sup = optimize::optimize_on_ball(weight, {ones, std::sqrt(upper_radius2), 0.0},
                                              optimize::Goal::maximize, options);
  const auto inf = optimize::optimize_on_ball(weight, {ones, std::sqrt(lower_radius2), 0.0},
                                              optimize::Goal::minimize, options);
  const double volume = unit_ball_volume(d);

  BoundsCertificate c;
  c.n = n;
  c.beta = beta;
  c.epsilon = epsilon;
  c.lambda = lambda;
  c.mu = mu;
  c.h_sup = sup.value;
  c.g_inf = inf.value;
  c.upper = c.h_sup * volume * std::pow(upper_radius2, 0.5 * d);
  c.lower = c.g_inf * volume * std::pow(lower_radius2, 0.5 * d);
  c.h_argmax = sup.argument;
  c.g_argmin = inf.argument;
  c.evaluations = sup.evaluations + inf.evaluations;
  c.certified = sup.certified && inf.certified;
  return c;
}

SandwichReport validate_sandwich(const density::DensityModel& model, int n, double epsilon, double beta) {
  if (n > 4) throw DomainError("validate_sandwich: region oracle available for n <= 4 only");
  const Curvature curv = curvature_functionals(n, beta);
  SandwichReport report;
  report.certificate = envelope_bounds(model, n, epsilon, curv.lambda, curv.mu, beta);
  report.integral = oracles::region_tail_integral(model, n, epsilon, beta, oracles::RegionIntegrand::paper);
  const double i = report.integral.value;
  const double slack = report.integral.error_estimate;
  report.holds = report.certificate.lower <= i + slack && i - slack <= report.certificate.upper;
  report.region_inside_upper_ball = report.integral.max_boundary_radius <= std::sqrt(epsilon / curv.lambda);
  report.lower_ball_inside_region = std::sqrt(epsilon / curv.mu) <= report.integral.min_boundary_radius;
  std::ostringstream out;
  out.precision(12);
  out << "lower=" << report.certificate.lower << " integral=" << i << " upper=" << report.certificate.upper
      << " lambda=" << curv.lambda << " mu=" << curv.mu << " region_radius=[" << report.integral.min_boundary_radius
      << "," << report.integral.max_boundary_radius << "]";
  report.diagnostics = out.str();
  return report;
}

}  // namespace sntail::bounds
