// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sntail/density.hpp"

namespace sntail::mc {

/// Independent +-1 signs with probability 1/2 each.
struct Rademacher {};
/// xi(1) = 0, the remaining coordinates iid standard normal.
struct DegenerateFirstCoordinate {};

using SamplerModel = std::variant<density::DensityModel, Rademacher, DegenerateFirstCoordinate>;

struct SamplerSpec {
  SamplerModel model = Rademacher{};
  int n = 2;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  int workers = 1;

  void validate() const;
};

/// Draws trial vectors. Trial t of seed s is the same vector regardless of
/// how trials are split across workers. Normal coordinates come from the
/// inverse CDF so every coordinate consumes exactly one uniform.
class Sampler {
public:
  explicit Sampler(const SamplerSpec& spec);

  int dimension() const { return n_; }
  void draw(std::uint64_t trial, std::span<double> out) const;

private:
  SamplerModel model_;
  int n_;
  std::uint64_t seed_;
};

/// All `spec.trials` vectors, in trial order.
std::vector<std::vector<double>> sample_batch(const SamplerSpec& spec);

enum class StatisticVariant {
  sum,          ///< sum x / ||x||_beta
  max_over_zn,  ///< max_{k=2..n} S(k) / ||x||_beta
  max_over_zk,  ///< max_{k=2..n} S(k) / ||x_{1..k}||_beta
};

struct StatisticSpec {
  double beta = 2.0;
  StatisticVariant variant = StatisticVariant::sum;
};

/// Throws DomainError for the zero vector (undefined statistic).
double statistic(std::span<const double> x, const StatisticSpec& spec);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

/// Score interval for a binomial proportion; z = 1.959963984540054 gives 95%.
WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.959963984540054);

struct MCEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
};

MCEstimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed);

/// P(statistic > threshold); requires trials >= 1000.
MCEstimate estimate_tail(const SamplerSpec& spec, const StatisticSpec& stat, double threshold);

struct MaxVsSumReport {
  MCEstimate r;      ///< max_k S(k)/Z(n) > sqrt(n) - eps
  MCEstimate r_bar;  ///< max_k S(k)/Z(k) > sqrt(n) - eps
  MCEstimate q;      ///< S(n)/Z(n) > sqrt(n) - eps
  std::uint64_t max_only = 0;    ///< trials where the max event occurred without the sum event
  std::uint64_t either = 0;      ///< trials where the max or the sum event occurred
  double coincidence_rate = 1.0; ///< fraction of `either` trials where both occurred
  bool all_coincide = true;
  double ratio = 0.0;            ///< R / Q point estimate
  double ratio_ci_low = 0.0;     ///< from the Wilson interval of Q-hits among R-hits
  double ratio_ci_high = 0.0;
  bool in_window = true;         ///< eps in (0, 1/(2 sqrt(n-1)))
  std::vector<std::string> warnings;
};

/// All three tails on common random numbers.
MaxVsSumReport compare_max_vs_sum(const SamplerSpec& spec, int n, double epsilon);

}  // namespace sntail::mc
