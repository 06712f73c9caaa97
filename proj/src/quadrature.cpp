// SPDX-License-Identifier: Apache-2.0
#include "sntail/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sntail/error.hpp"

namespace sntail {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// The 10 Gauss nodes are the odd-indexed Kronrod abscissae.
Panel evaluate_panel(const Integrand& f, double a, double b) {
  static const auto& xk = Kronrod::abscissa();
  static const auto& wk = Kronrod::weights();
  static const auto& wg = Gauss::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(center);
  double kronrod = wk[0] * f0;
  double gauss = 0.0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += wk[i] * pair;
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

constexpr std::size_t kEvaluationsPerPanel = 21;

}  // namespace

QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");
  std::priority_queue<Panel> panels;
  QuadratureResult result;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] <= breakpoints[i + 1]))
      throw DomainError("integrate: breakpoints must be sorted");
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1]);
    result.value += p.value;
    result.error += p.error;
    result.evaluations += kEvaluationsPerPanel;
    panels.push(p);
  }

  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::fabs(result.value)); };
  while (!panels.empty() && result.error > tolerance()) {
    if (panels.size() >= options.max_panels) {
      throw QuadratureError("integrate: panel budget exhausted (achieved error " +
                                std::to_string(result.error) + ")",
                            result.error);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("integrate: panel width underflow", result.error);
    }
    const Panel left = evaluate_panel(f, worst.a, mid);
    const Panel right = evaluate_panel(f, mid, worst.b);
    result.evaluations += 2 * kEvaluationsPerPanel;
    result.value += left.value + right.value - worst.value;
    result.error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Resum to shed the drift of the incremental updates.
  result.value = 0.0;
  result.error = 0.0;
  while (!panels.empty()) {
    result.value += panels.top().value;
    result.error += panels.top().error;
    panels.pop();
  }
  if (!std::isfinite(result.value)) throw QuadratureError("integrate: non-finite integral", result.error);
  return result;
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options) {
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, options);
    r.value = -r.value;
    return r;
  }
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts), options);
}

QuadratureResult integrate_half_line(const Integrand& f, const QuadratureOptions& options,
                                     double tail_threshold) {
  constexpr double kScanStart = 1e-6;
  constexpr double kScanEnd = 1e8;
  const double ratio = std::sqrt(2.0);

  std::vector<double> z;
  std::vector<double> fz;
  for (double x = kScanStart; x <= kScanEnd; x *= ratio) {
    z.push_back(x);
    fz.push_back(f(x));
  }
  const auto peak_it = std::max_element(fz.begin(), fz.end());
  const double peak = *peak_it;
  QuadratureResult result;
  result.evaluations = z.size();
  if (!(peak > 0.0)) return result;
  const std::size_t peak_index = static_cast<std::size_t>(peak_it - fz.begin());

  const double cutoff = tail_threshold * peak;
  std::size_t last_significant = peak_index;
  for (std::size_t i = peak_index; i < z.size(); ++i) {
    if (fz[i] >= cutoff) last_significant = i;
  }
  if (last_significant + 1 >= z.size()) {
    throw QuadratureError("integrate_half_line: integrand tail does not decay", fz.back());
  }
  const double upper = z[last_significant + 1];

  std::size_t first_significant = peak_index;
  while (first_significant > 0 && fz[first_significant - 1] >= cutoff) --first_significant;

  std::vector<double> breaks{0.0};
  for (double b : {z[first_significant], z[peak_index], upper}) {
    if (b > breaks.back()) breaks.push_back(b);
  }
  QuadratureResult body = integrate(f, std::span<const double>(breaks), options);
  body.evaluations += result.evaluations;
  return body;
}

}  // namespace sntail
