// SPDX-License-Identifier: Apache-2.0
//
// Structured two-parameter matrices, the criterion functions g and g_beta
// whose maximizer at v = (1, ..., 1) governs the tail of the self-normalized
// sum, and the anti-Hessian at that maximizer.
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sntail::analytic {

/// The m x m symmetric matrix with `a` on the diagonal and `b` elsewhere.
struct StructuredMatrix {
  int m = 1;
  double a = 0.0;
  double b = 0.0;

  Eigen::MatrixXd materialize() const;
};

/// Largest dimension for which dense anti-Hessians are materialized.
inline constexpr int kMaxDenseSize = 64;

struct AntiHessianSpec {
  int n = 2;           ///< dimension of the random vector; the matrix is (n-1) x (n-1)
  double beta = 2.0;   ///< norming exponent, 2 is the classical Student-type norm

  /// Throws DomainError unless n >= 2 and beta > 1.
  void validate() const;
};

/// Which closed form produces the anti-Hessian entries: the classical
/// n^{-1/2} - n^{-3/2} / -n^{-3/2} pair, or the (beta - 1)-scaled family.
enum class EntryForm { classical, beta };

/// det of StructuredMatrix(m, a, b) as the eigenvalue product
/// (a - b)^{m-1} (a + (m - 1) b).
double det_eigen_closed(int m, double a, double b);
double det_eigen_closed(const StructuredMatrix& s);

/// log |det| of the same matrix; usable where the product over/underflows.
double log_abs_det_eigen_closed(const StructuredMatrix& s);

/// Determinant by partial-pivot LU. Throws DomainError on non-square input
/// or non-finite entries.
double det_numeric(const Eigen::MatrixXd& m);

/// The two structured entries of the anti-Hessian. `classical` requires
/// beta == 2.
StructuredMatrix anti_hessian_structure(const AntiHessianSpec& spec, EntryForm form);

/// Classical entries at beta == 2, the beta family otherwise.
StructuredMatrix anti_hessian_structure(const AntiHessianSpec& spec);

/// Dense anti-Hessian; n - 1 must not exceed kMaxDenseSize.
Eigen::MatrixXd build_anti_hessian(const AntiHessianSpec& spec);

/// Determinant of the anti-Hessian from the oracle-confirmed eigenvalue product.
double det_anti_hessian(const AntiHessianSpec& spec);
double log_det_anti_hessian(const AntiHessianSpec& spec);

/// Printed determinant formula kept for comparison:
/// (beta-1)^{n-1} n^{-(n-2)/beta} [2 n^{-1/beta} - 3 n^{-1-1/beta}].
double det_anti_hessian_paper(const AntiHessianSpec& spec);
double log_det_anti_hessian_paper(const AntiHessianSpec& spec);

/// Eigenvalues of the anti-Hessian, (smallest, largest).
std::pair<double, double> anti_hessian_eigen_range(const AntiHessianSpec& spec);

struct CriterionPoint {
  std::vector<double> v;  ///< dimension n - 1
  double beta = 2.0;

  int n() const { return static_cast<int>(v.size()) + 1; }
};

/// g_beta(v) = (1 + sum v_j) / (1 + sum |v_j|^beta)^{1/beta}.
/// For beta != 2 negative coordinates are rejected.
double g_value(const CriterionPoint& point);

/// Same function without validation, with |v_j|^beta in the norm. Region
/// integration and optimization evaluate it off the positive orthant.
double criterion(std::span<const double> v, double beta);

/// n^{1 - 1/beta}, the maximum of g_beta, attained at v = 1.
double criterion_max(int n, double beta);

/// Central-difference Hessian of g_beta at the point. Steps are
/// eps^{1/4} * max(1, |v_j|). Throws DomainError if a step underflows.
Eigen::MatrixXd hessian_fd(const CriterionPoint& point);

}  // namespace sntail::analytic
