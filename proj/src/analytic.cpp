// SPDX-License-Identifier: Apache-2.0
#include "sntail/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sntail/error.hpp"

namespace sntail::analytic {

Eigen::MatrixXd StructuredMatrix::materialize() const {
  if (m < 1) throw DomainError("StructuredMatrix: size must be >= 1");
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(m, m, b);
  out.diagonal().setConstant(a);
  return out;
}

void AntiHessianSpec::validate() const {
  if (n < 2) throw DomainError("anti-Hessian: n must be >= 2 (got " + std::to_string(n) + ")");
  if (!(beta > 1.0) || !std::isfinite(beta))
    throw DomainError("anti-Hessian: beta must be > 1 (got " + std::to_string(beta) + ")");
}

double det_eigen_closed(int m, double a, double b) {
  if (m < 1) throw DomainError("det_eigen_closed: size must be >= 1");
  return std::pow(a - b, m - 1) * (a + (m - 1) * b);
}

double det_eigen_closed(const StructuredMatrix& s) { return det_eigen_closed(s.m, s.a, s.b); }

double log_abs_det_eigen_closed(const StructuredMatrix& s) {
  if (s.m < 1) throw DomainError("log_abs_det_eigen_closed: size must be >= 1");
  return (s.m - 1) * std::log(std::fabs(s.a - s.b)) + std::log(std::fabs(s.a + (s.m - 1) * s.b));
}

double det_numeric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("det_numeric: matrix must be square");
  if (!m.allFinite()) throw DomainError("det_numeric: matrix has non-finite entries");
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

StructuredMatrix anti_hessian_structure(const AntiHessianSpec& spec, EntryForm form) {
  spec.validate();
  const double n = spec.n;
  const int m = spec.n - 1;
  if (form == EntryForm::classical) {
    if (spec.beta != 2.0) throw DomainError("anti-Hessian: classical entries need beta == 2");
    const double off = std::pow(n, -1.5);
    return {m, std::pow(n, -0.5) - off, -off};
  }
  const double scale = spec.beta - 1.0;
  const double off = scale * std::pow(n, -1.0 - 1.0 / spec.beta);
  return {m, scale * std::pow(n, -1.0 / spec.beta) - off, -off};
}

StructuredMatrix anti_hessian_structure(const AntiHessianSpec& spec) {
  return anti_hessian_structure(spec, spec.beta == 2.0 ? EntryForm::classical : EntryForm::beta);
}

Eigen::MatrixXd build_anti_hessian(const AntiHessianSpec& spec) {
  spec.validate();
  if (spec.n - 1 > kMaxDenseSize)
    throw DomainError("build_anti_hessian: dense form limited to n - 1 <= " +
                      std::to_string(kMaxDenseSize));
  return anti_hessian_structure(spec).materialize();
}

double det_anti_hessian(const AntiHessianSpec& spec) {
  return det_eigen_closed(anti_hessian_structure(spec));
}

double log_det_anti_hessian(const AntiHessianSpec& spec) {
  // Both eigenvalues are positive for every valid spec.
  return log_abs_det_eigen_closed(anti_hessian_structure(spec));
}

double log_det_anti_hessian_paper(const AntiHessianSpec& spec) {
  spec.validate();
  const double n = spec.n;
  const double beta = spec.beta;
  const double bracket = 2.0 * std::pow(n, -1.0 / beta) - 3.0 * std::pow(n, -1.0 - 1.0 / beta);
  return (n - 1.0) * std::log(beta - 1.0) - (n - 2.0) / beta * std::log(n) + std::log(bracket);
}

double det_anti_hessian_paper(const AntiHessianSpec& spec) {
  return std::exp(log_det_anti_hessian_paper(spec));
}

std::pair<double, double> anti_hessian_eigen_range(const AntiHessianSpec& spec) {
  const StructuredMatrix s = anti_hessian_structure(spec);
  const double repeated = s.a - s.b;
  const double single = s.a + (s.m - 1) * s.b;
  if (s.m == 1) return {single, single};
  return {std::min(repeated, single), std::max(repeated, single)};
}

double criterion(std::span<const double> v, double beta) {
  double sum = 1.0;
  double norm = 1.0;
  if (beta == 2.0) {
    for (double x : v) {
      sum += x;
      norm += x * x;
    }
    return sum / std::sqrt(norm);
  }
  for (double x : v) {
    sum += x;
    norm += std::pow(std::fabs(x), beta);
  }
  return sum / std::pow(norm, 1.0 / beta);
}

double g_value(const CriterionPoint& point) {
  if (point.v.empty()) throw DomainError("g_value: v must have dimension n - 1 >= 1");
  if (!(point.beta > 1.0)) throw DomainError("g_value: beta must be > 1");
  for (double x : point.v) {
    if (!std::isfinite(x)) throw DomainError("g_value: non-finite coordinate");
    if (point.beta != 2.0 && x < 0.0)
      throw DomainError("g_value: coordinates must be >= 0 when beta != 2");
  }
  return criterion(point.v, point.beta);
}

double criterion_max(int n, double beta) {
  if (beta == 2.0) return std::sqrt(static_cast<double>(n));
  return std::pow(static_cast<double>(n), 1.0 - 1.0 / beta);
}

Eigen::MatrixXd hessian_fd(const CriterionPoint& point) {
  g_value(point);  // validates
  const std::size_t d = point.v.size();
  const double base_step = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  std::vector<double> step(d);
  for (std::size_t j = 0; j < d; ++j) {
    step[j] = base_step * std::max(1.0, std::fabs(point.v[j]));
    const double up = point.v[j] + step[j];
    if (!(up - point.v[j] > 0.0)) throw DomainError("hessian_fd: step size underflow");
    // Exact representable step.
    step[j] = up - point.v[j];
  }
  if (point.beta != 2.0) {
    for (std::size_t j = 0; j < d; ++j) {
      if (point.v[j] - step[j] < 0.0)
        throw DomainError("hessian_fd: stencil leaves the positive orthant");
    }
  }

  std::vector<double> x = point.v;
  auto eval = [&] { return criterion(x, point.beta); };
  const double center = eval();
  Eigen::MatrixXd hess(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    x[j] = point.v[j] + step[j];
    const double fp = eval();
    x[j] = point.v[j] - step[j];
    const double fm = eval();
    x[j] = point.v[j];
    hess(j, j) = (fp - 2.0 * center + fm) / (step[j] * step[j]);
    for (std::size_t k = 0; k < j; ++k) {
      double acc = 0.0;
      for (int sj : {1, -1}) {
        for (int sk : {1, -1}) {
          x[j] = point.v[j] + sj * step[j];
          x[k] = point.v[k] + sk * step[k];
          acc += sj * sk * eval();
        }
      }
      x[j] = point.v[j];
      x[k] = point.v[k];
      hess(j, k) = hess(k, j) = acc / (4.0 * step[j] * step[k]);
    }
  }
  return hess;
}

}  // namespace sntail::analytic
