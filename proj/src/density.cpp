// SPDX-License-Identifier: Apache-2.0
#include "sntail/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sntail/error.hpp"

namespace sntail::density {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

void validate_family(const Univariate& family) {
  std::visit(overloaded{
                 [](const Normal& d) {
                   if (!(d.sigma > 0.0) || !std::isfinite(d.mu) || !std::isfinite(d.sigma))
                     throw DomainError("normal: sigma must be > 0 and parameters finite");
                 },
                 [](const StudentT& d) {
                   if (!(d.nu > 2.0) || !std::isfinite(d.nu))
                     throw DomainError("student-t: nu must be > 2");
                 },
                 [](const FoldedNormal& d) {
                   if (!std::isfinite(d.shift)) throw DomainError("folded-normal: shift must be finite");
                 },
             },
             family);
}

}  // namespace

double univariate_log_pdf(const Univariate& family, double x) {
  return std::visit(
      overloaded{
          [x](const Normal& d) { return normal_log_pdf((x - d.mu) / d.sigma) - std::log(d.sigma); },
          [x](const StudentT& d) {
            const double nu = d.nu;
            return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                   0.5 * std::log(nu * std::numbers::pi) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
          },
          [x](const FoldedNormal& d) {
            if (x < d.shift) return -std::numeric_limits<double>::infinity();
            return std::numbers::ln2 + normal_log_pdf(x - d.shift);
          },
      },
      family);
}

DensityModel DensityModel::iid(Univariate family, int n) {
  if (n < 1) throw DomainError("density: dimension must be >= 1");
  validate_family(family);
  return DensityModel(IidModel{family}, n);
}

DensityModel DensityModel::gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  const auto n = covariance.rows();
  if (n < 1 || covariance.cols() != n) throw DomainError("gaussian: covariance must be square");
  if (mean.size() != n) throw DomainError("gaussian: mean and covariance dimensions differ");
  if (!covariance.allFinite() || !mean.allFinite()) throw DomainError("gaussian: non-finite parameters");
  const double scale = covariance.cwiseAbs().maxCoeff();
  if (!((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale))
    throw DomainError("gaussian: covariance must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw DomainError("gaussian: covariance is not positive definite");
  Eigen::MatrixXd lower = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(lower(i, i));
  GaussianModel g{std::move(mean), std::move(covariance), std::move(lower),
                  -static_cast<double>(n) * kLogSqrt2Pi - 0.5 * log_det};
  return DensityModel(std::move(g), static_cast<int>(n));
}

DensityModel DensityModel::bivariate_gaussian(double rho) {
  if (!(std::fabs(rho) < 1.0)) throw DomainError("gaussian: |rho| must be < 1");
  Eigen::Matrix2d cov;
  cov << 1.0, rho, rho, 1.0;
  return gaussian(Eigen::Vector2d::Zero(), cov);
}

DensityModel DensityModel::user(int n, DensityFunction density, std::string name) {
  if (n < 1) throw DomainError("density: dimension must be >= 1");
  if (!density) throw DomainError("density: user model needs a callable");
  return DensityModel(UserModel{std::move(density), std::move(name)}, n);
}

std::string DensityModel::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const IidModel& m) {
                   std::visit(overloaded{
                                  [&](const Normal& d) { out << "iid-normal(mu=" << d.mu << ",sigma=" << d.sigma << ")"; },
                                  [&](const StudentT& d) { out << "iid-student-t(nu=" << d.nu << ")"; },
                                  [&](const FoldedNormal& d) { out << "iid-folded-normal(shift=" << d.shift << ")"; },
                              },
                              m.family);
                 },
                 [&](const GaussianModel&) { out << "gaussian"; },
                 [&](const UserModel& m) { out << m.name; },
             },
             kind_);
  out << "[n=" << n_ << "]";
  return out.str();
}

bool DensityModel::symmetric() const {
  return std::visit(overloaded{
                        [](const IidModel& m) {
                          return std::visit(overloaded{
                                                [](const Normal& d) { return d.mu == 0.0; },
                                                [](const StudentT&) { return true; },
                                                [](const FoldedNormal&) { return false; },
                                            },
                                            m.family);
                        },
                        [](const GaussianModel& g) { return g.mean.isZero(0.0); },
                        [](const UserModel&) { return false; },
                    },
                    kind_);
}

bool DensityModel::spherically_symmetric() const {
  return std::visit(
      overloaded{
          [](const IidModel& m) {
            const auto* normal = std::get_if<Normal>(&m.family);
            return normal != nullptr && normal->mu == 0.0;
          },
          [](const GaussianModel& g) {
            const double d = g.covariance(0, 0);
            const auto n = g.covariance.rows();
            return g.mean.isZero(0.0) &&
                   g.covariance.isApprox(d * Eigen::MatrixXd::Identity(n, n), 0.0);
          },
          [](const UserModel&) { return false; },
      },
      kind_);
}

double DensityModel::evaluate(std::span<const double> x) const {
  return std::visit(overloaded{
                        [&](const IidModel& m) {
                          double log_f = 0.0;
                          for (double xi : x) log_f += univariate_log_pdf(m.family, xi);
                          return std::exp(log_f);
                        },
                        [&](const GaussianModel& g) {
                          Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
                          const Eigen::VectorXd w =
                              g.cholesky.triangularView<Eigen::Lower>().solve(xv - g.mean);
                          return std::exp(g.log_normalizer - 0.5 * w.squaredNorm());
                        },
                        [&](const UserModel& m) {
                          const double value = m.density(x);
                          if (!(value >= 0.0) || !std::isfinite(value))
                            throw DomainError("density: user model returned " + std::to_string(value));
                          return value;
                        },
                    },
                    kind_);
}

double eval_density(const DensityModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dimension())
    throw DomainError("eval_density: expected dimension " + std::to_string(model.dimension()) +
                      ", got " + std::to_string(x.size()));
  for (double xi : x) {
    if (!std::isfinite(xi)) throw DomainError("eval_density: non-finite coordinate");
  }
  return model.evaluate(x);
}

QuadratureResult h_profile_result(const DensityModel& model, const RadialProfileQuery& query,
                                  const ProfileOptions& options) {
  const int n = model.dimension();
  if (static_cast<int>(query.v.size()) != n - 1)
    throw DomainError("h_profile: v must have dimension n - 1 = " + std::to_string(n - 1));
  for (double vj : query.v) {
    if (!std::isfinite(vj)) throw DomainError("h_profile: non-finite v");
  }

  std::vector<double> x(static_cast<std::size_t>(n));
  // Density along the ray z * (1, v) for z > 0, or its reflection.
  auto along_ray = [&](double z, double sign) {
    x[0] = sign * z;
    for (std::size_t j = 0; j < query.v.size(); ++j) x[j + 1] = sign * z * query.v[j];
    return model.evaluate(x);
  };

  switch (query.variant) {
    case ProfileVariant::paper: {
      QuadratureResult pos = integrate_half_line([&](double z) { return along_ray(z, 1.0); },
                                                 options.quadrature, options.tail_threshold);
      QuadratureResult neg = integrate_half_line([&](double z) { return along_ray(z, -1.0); },
                                                 options.quadrature, options.tail_threshold);
      return {pos.value + neg.value, pos.error + neg.error, pos.evaluations + neg.evaluations};
    }
    case ProfileVariant::weighted:
    case ProfileVariant::mirror: {
      const double sign = query.variant == ProfileVariant::weighted ? 1.0 : -1.0;
      return integrate_half_line(
          [&](double z) { return std::pow(z, n - 1) * along_ray(z, sign); }, options.quadrature,
          options.tail_threshold);
    }
  }
  throw DomainError("h_profile: unknown variant");
}

double h_profile(const DensityModel& model, const RadialProfileQuery& query,
                 const ProfileOptions& options) {
  return h_profile_result(model, query, options).value;
}

const char* to_string(ProfileVariant variant) {
  switch (variant) {
    case ProfileVariant::paper: return "paper";
    case ProfileVariant::weighted: return "weighted";
    case ProfileVariant::mirror: return "mirror";
  }
  return "?";
}

}  // namespace sntail::density
