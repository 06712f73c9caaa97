// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sntail/quadrature.hpp"

namespace sntail::density {

struct Normal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Student-t with nu > 2 degrees of freedom.
struct StudentT {
  double nu = 5.0;
};

/// shift + |Z| with Z standard normal; strictly positive for shift > 0.
struct FoldedNormal {
  double shift = 1.0;
};

using Univariate = std::variant<Normal, StudentT, FoldedNormal>;

struct IidModel {
  Univariate family;
};

struct GaussianModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd cholesky;  ///< lower factor of the covariance
  double log_normalizer = 0.0;
};

using DensityFunction = std::function<double(std::span<const double>)>;

struct UserModel {
  DensityFunction density;
  std::string name;
};

/// A joint density on R^n. Immutable after construction.
class DensityModel {
public:
  using Kind = std::variant<IidModel, GaussianModel, UserModel>;

  static DensityModel iid(Univariate family, int n);
  static DensityModel iid_standard_normal(int n) { return iid(Normal{}, n); }
  /// Throws DomainError unless the covariance is symmetric positive definite.
  static DensityModel gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
  /// Two-dimensional standard Gaussian with correlation rho.
  static DensityModel bivariate_gaussian(double rho);
  static DensityModel user(int n, DensityFunction density, std::string name = "user");

  int dimension() const { return n_; }
  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// f(-x) == f(x) for every x.
  bool symmetric() const;
  /// Invariant under rotations about the origin (so the sphere oracle applies).
  bool spherically_symmetric() const;

  double evaluate(std::span<const double> x) const;

private:
  DensityModel(Kind kind, int n) : kind_(std::move(kind)), n_(n) {}
  Kind kind_;
  int n_;
};

/// f(x); throws DomainError on dimension mismatch or non-finite input.
double eval_density(const DensityModel& model, std::span<const double> x);

double univariate_log_pdf(const Univariate& family, double x);

enum class ProfileVariant {
  paper,     ///< int_R f(z, z v) dz
  weighted,  ///< int_0^inf z^{n-1} f(z, z v) dz, the Jacobian-weighted branch x(1) > 0
  mirror,    ///< int_{-inf}^0 |z|^{n-1} f(z, z v) dz, the branch x(1) < 0
};

struct RadialProfileQuery {
  std::vector<double> v;  ///< dimension n - 1
  ProfileVariant variant = ProfileVariant::weighted;
};

struct ProfileOptions {
  QuadratureOptions quadrature{};
  double tail_threshold = 1e-16;
};

/// Radial profile integral with its quadrature error estimate.
QuadratureResult h_profile_result(const DensityModel& model, const RadialProfileQuery& query,
                                  const ProfileOptions& options = {});

double h_profile(const DensityModel& model, const RadialProfileQuery& query,
                 const ProfileOptions& options = {});

const char* to_string(ProfileVariant variant);

}  // namespace sntail::density
