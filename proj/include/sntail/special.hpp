// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace sntail {

/// Regularized incomplete beta I_x(a, b), evaluated by the modified Lentz
/// continued fraction with the symmetry switch at x > (a + 1) / (a + b + 2).
/// Relative accuracy is ~1e-14 away from underflow.
double incomplete_beta(double a, double b, double x);

/// log B(a, b).
double log_beta(double a, double b);

/// Volume of the unit ball in R^d, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);
double log_unit_ball_volume(int d);

}  // namespace sntail
