// SPDX-License-Identifier: Apache-2.0
#include "sntail/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "sntail/analytic.hpp"
#include "sntail/error.hpp"
#include "sntail/special.hpp"

namespace sntail::asymptotics {
namespace {

constexpr int kLogDomainThreshold = 50;

void validate_n_beta(int n, double beta) {
  if (n < 2) throw DomainError("n must be >= 2 (got " + std::to_string(n) + ")");
  if (!(beta > 1.0) || !std::isfinite(beta)) throw DomainError("beta must be > 1");
}

KConstant assemble(int n, double log_det, Variant variant) {
  const double d = n - 1;
  const double log_two_power = (variant == Variant::paper ? -0.5 : 0.5) * d * std::numbers::ln2;
  KConstant k;
  k.log_determinant = log_det;
  k.determinant = std::exp(log_det);
  k.ball_volume = unit_ball_volume(n - 1);
  k.log_value = log_two_power - 0.5 * log_det + log_unit_ball_volume(n - 1);
  if (n > kLogDomainThreshold) {
    k.value = std::exp(k.log_value);
  } else {
    k.value = std::exp(log_two_power) / std::sqrt(k.determinant) * k.ball_volume;
  }
  return k;
}

KConstant k_from_structure(int n, double beta, Variant variant, analytic::EntryForm form) {
  validate_n_beta(n, beta);
  const analytic::AntiHessianSpec spec{n, beta};
  const double log_det = variant == Variant::paper
                             ? analytic::log_det_anti_hessian_paper(spec)
                             : analytic::log_abs_det_eigen_closed(analytic::anti_hessian_structure(spec, form));
  return assemble(n, log_det, variant);
}

}  // namespace

void TailQuery::validate() const {
  validate_n_beta(n, beta);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (side != Side::right && beta != 2.0)
    throw DomainError("left and two-sided tails are only defined for beta == 2");
  if (!(epsilon < analytic::criterion_max(n, beta)))
    throw DomainError("eps must be below n^{1-1/beta}");
}

double TailQuery::threshold() const { return analytic::criterion_max(n, beta) - epsilon; }

KConstant k_constant(int n, double beta, Variant variant) {
  return k_from_structure(n, beta, variant,
                          beta == 2.0 ? analytic::EntryForm::classical : analytic::EntryForm::beta);
}

KConstant k_constant_beta_form(int n, double beta, Variant variant) {
  return k_from_structure(n, beta, variant, analytic::EntryForm::beta);
}

Prediction predict_tail(const density::DensityModel& model, const TailQuery& query, Variant variant,
                        const density::ProfileOptions& options) {
  query.validate();
  if (model.dimension() != query.n)
    throw DomainError("predict_tail: model dimension differs from n");

  const KConstant k = k_constant(query.n, query.beta, variant);
  const std::vector<double> ones(static_cast<std::size_t>(query.n - 1), 1.0);
  const std::vector<double> minus_ones(ones.size(), -1.0);
  auto profile = [&](const std::vector<double>& v, density::ProfileVariant pv) {
    return density::h_profile(model, {v, pv}, options);
  };

  double h_right = 0.0;
  double h_left = 0.0;
  const bool need_right = query.side != Side::left;
  const bool need_left = query.side != Side::right;
  if (variant == Variant::paper) {
    if (need_right) h_right = profile(ones, density::ProfileVariant::paper);
    if (need_left) h_left = profile(minus_ones, density::ProfileVariant::paper);
  } else {
    if (need_right) h_right = profile(ones, density::ProfileVariant::weighted);
    if (need_left) h_left = profile(ones, density::ProfileVariant::mirror);
  }
  const double h = h_right + h_left;
  if (!(h > 0.0)) throw DegenerateError("predict_tail: profile vanishes at the maximizer; leading term degenerate");

  Prediction p;
  p.n = query.n;
  p.beta = query.beta;
  p.epsilon = query.epsilon;
  p.side = query.side;
  p.variant = variant;
  p.k = k.value;
  p.h = h;
  p.determinant = k.determinant;
  p.constant = k.value * h;
  p.exponent = 0.5 * (query.n - 1);
  p.value = p.constant * std::pow(query.epsilon, p.exponent);
  if (query.epsilon > 0.5) p.warnings.emplace_back("eps > 0.5: asymptotic regime questionable");
  return p;
}

Prediction predict_gamma_variant(const GammaVariantQuery& query) {
  if (query.n < 2) throw DomainError("n must be >= 2");
  if (!(query.gamma > 1.0 - query.n)) throw DomainError("gamma must exceed 1 - n");
  if (!(query.epsilon > 0.0)) throw DomainError("eps must be positive");
  const double n = query.n;
  const double log_det = analytic::log_det_anti_hessian_paper({query.n, 2.0});
  const double order = n + query.gamma - 1.0;
  const double log_prefactor = -0.5 * (n - 3.0) * std::numbers::ln2 - 0.5 * log_det +
                               0.5 * (n - 1.0) * std::log(std::numbers::pi) -
                               std::lgamma(0.5 * (n - 1.0)) - std::log(order);
  Prediction p;
  p.n = query.n;
  p.beta = 2.0;
  p.epsilon = query.epsilon;
  p.variant = Variant::paper;
  p.determinant = std::exp(log_det);
  p.constant = std::exp(log_prefactor);
  p.k = p.constant;
  p.h = 1.0;
  p.exponent = 0.5 * order;
  p.value = p.constant * std::pow(query.epsilon, p.exponent);
  return p;
}

std::vector<std::pair<int, double>> log_growth_check(double beta, const std::vector<int>& n_values) {
  std::vector<std::pair<int, double>> out;
  out.reserve(n_values.size());
  for (int n : n_values) {
    const KConstant k = k_constant(n, beta, Variant::paper);
    out.emplace_back(n, k.log_value / (std::log(static_cast<double>(n)) * n));
  }
  return out;
}

double reference_bound(ReferenceBound kind, double b, int n, double beta) {
  if (!(b > 0.0)) throw DomainError("reference_bound: B must be positive");
  validate_n_beta(n, beta);
  switch (kind) {
    case ReferenceBound::jing:
      return std::exp(-0.5 * b * b);
    case ReferenceBound::fan:
      if (beta > 2.0) throw DomainError("reference_bound: fan bound needs beta in (1, 2]");
      return std::exp(-0.5 * b * b * std::pow(static_cast<double>(n), 2.0 / beta - 1.0));
    case ReferenceBound::holder_cutoff:
      return b >= analytic::criterion_max(n, beta) ? 0.0 : 1.0;
  }
  throw DomainError("reference_bound: unknown kind");
}

const char* to_string(Variant v) { return v == Variant::paper ? "paper" : "corrected"; }

const char* to_string(Side s) {
  switch (s) {
    case Side::right: return "right";
    case Side::left: return "left";
    case Side::two_sided: return "two-sided";
  }
  return "?";
}

const char* to_string(ReferenceBound b) {
  switch (b) {
    case ReferenceBound::jing: return "jing";
    case ReferenceBound::fan: return "fan";
    case ReferenceBound::holder_cutoff: return "holder-cutoff";
  }
  return "?";
}

}  // namespace sntail::asymptotics
