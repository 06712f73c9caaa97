// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sntail {

using Integrand = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  /// Maximum number of panels kept by the global subdivision.
  std::size_t max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature over [a, b], with the
/// embedded 10-point Gauss rule as error estimator. The panel with the largest
/// error estimate is bisected until error <= max(abs_tol, rel_tol * |value|).
/// Throws QuadratureError when the panel budget runs out.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Same, starting from the panels delimited by `breakpoints` (sorted,
/// at least two entries).
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

/// Integral over [0, inf) of a nonnegative integrand with a Gaussian or
/// polynomial tail. The domain is truncated at the first point beyond the
/// peak where the integrand stays below `tail_threshold * peak` on a
/// geometric scan out to 1e8.
QuadratureResult integrate_half_line(const Integrand& f, const QuadratureOptions& options = {},
                                     double tail_threshold = 1e-16);

}  // namespace sntail
