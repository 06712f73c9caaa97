// SPDX-License-Identifier: Apache-2.0
#include "sntail/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "sntail/analytic.hpp"
#include "sntail/error.hpp"
#include "sntail/philox.hpp"

namespace sntail::mc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kMinTrials = 1000;

double normal_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

double univariate_quantile(const density::Univariate& family, double u) {
  return std::visit(overloaded{
                        [u](const density::Normal& d) { return d.mu + d.sigma * normal_quantile(u); },
                        [u](const density::StudentT& d) {
                          return boost::math::quantile(boost::math::students_t_distribution<double>(d.nu), u);
                        },
                        [u](const density::FoldedNormal& d) { return d.shift + std::fabs(normal_quantile(u)); },
                    },
                    family);
}

// Runs `body(first, last, counters)` on `workers` contiguous trial ranges
// and sums the integer counters; the result is independent of `workers`.
template <std::size_t K, class Body>
std::array<std::uint64_t, K> parallel_count(std::uint64_t trials, int workers, Body body) {
  const auto w = static_cast<std::uint64_t>(std::max(1, workers));
  std::vector<std::array<std::uint64_t, K>> partial(w);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = trials / w;
  const std::uint64_t extra = trials % w;
  std::uint64_t first = 0;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t last = first + chunk + (i < extra ? 1 : 0);
    partial[i].fill(0);
    threads.emplace_back([&body, &partial, i, first, last] { body(first, last, partial[i]); });
    first = last;
  }
  for (auto& t : threads) t.join();
  std::array<std::uint64_t, K> total{};
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
  }
  return total;
}

}  // namespace

void SamplerSpec::validate() const {
  if (n < 2) throw DomainError("sampler: n must be >= 2");
  if (trials < 1) throw DomainError("sampler: trials must be positive");
  if (workers < 1) throw DomainError("sampler: workers must be positive");
  if (const auto* m = std::get_if<density::DensityModel>(&model)) {
    if (m->dimension() != n) throw DomainError("sampler: model dimension differs from n");
    if (std::holds_alternative<density::UserModel>(m->kind()))
      throw DomainError("sampler: user-supplied densities cannot be sampled");
  }
}

Sampler::Sampler(const SamplerSpec& spec) : model_(spec.model), n_(spec.n), seed_(spec.seed) { spec.validate(); }

void Sampler::draw(std::uint64_t trial, std::span<double> out) const {
  const CounterStream stream(seed_);
  const auto count = static_cast<std::size_t>(n_);
  std::array<std::uint64_t, 2> words{};
  auto uniform = [&](std::size_t i) {
    if (i % 2 == 0) words = stream.block(trial, static_cast<std::uint32_t>(i / 2));
    return to_open_unit(words[i % 2]);
  };
  std::visit(overloaded{
                 [&](const density::DensityModel& m) {
                   std::visit(overloaded{
                                  [&](const density::IidModel& iid) {
                                    for (std::size_t i = 0; i < count; ++i)
                                      out[i] = univariate_quantile(iid.family, uniform(i));
                                  },
                                  [&](const density::GaussianModel& g) {
                                    Eigen::VectorXd z(n_);
                                    for (std::size_t i = 0; i < count; ++i)
                                      z[static_cast<Eigen::Index>(i)] = normal_quantile(uniform(i));
                                    const Eigen::VectorXd x = g.mean + g.cholesky * z;
                                    for (std::size_t i = 0; i < count; ++i) out[i] = x[static_cast<Eigen::Index>(i)];
                                  },
                                  [&](const density::UserModel&) {
                                    throw DomainError("sampler: user-supplied densities cannot be sampled");
                                  },
                              },
                              m.kind());
                 },
                 [&](const Rademacher&) {
                   for (std::size_t i = 0; i < count; ++i) out[i] = uniform(i) < 0.5 ? -1.0 : 1.0;
                 },
                 [&](const DegenerateFirstCoordinate&) {
                   out[0] = 0.0;
                   // Coordinate i keeps uniform i so the stream layout matches the other models.
                   uniform(0);
                   for (std::size_t i = 1; i < count; ++i) out[i] = normal_quantile(uniform(i));
                 },
             },
             model_);
}

std::vector<std::vector<double>> sample_batch(const SamplerSpec& spec) {
  const Sampler sampler(spec);
  std::vector<std::vector<double>> out(spec.trials, std::vector<double>(static_cast<std::size_t>(spec.n)));
  for (std::uint64_t t = 0; t < spec.trials; ++t) sampler.draw(t, out[t]);
  return out;
}

double statistic(std::span<const double> x, const StatisticSpec& spec) {
  if (!(spec.beta > 1.0)) throw DomainError("statistic: beta must be > 1");
  if (x.size() < 1) throw DomainError("statistic: empty vector");
  const bool classical = spec.beta == 2.0;
  auto power = [&](double v) { return classical ? v * v : std::pow(std::fabs(v), spec.beta); };
  auto root = [&](double s) { return classical ? std::sqrt(s) : std::pow(s, 1.0 / spec.beta); };

  double sum = 0.0;
  double norm = 0.0;
  for (double v : x) {
    sum += v;
    norm += power(v);
  }
  if (norm == 0.0) throw DomainError("statistic: undefined for the zero vector");
  if (spec.variant == StatisticVariant::sum) return sum / root(norm);

  const double full = root(norm);
  double partial_sum = x[0];
  double partial_norm = power(x[0]);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < x.size(); ++k) {
    partial_sum += x[k];
    partial_norm += power(x[k]);
    double value;
    if (spec.variant == StatisticVariant::max_over_zn) {
      value = partial_sum / full;
    } else {
      // S(k) = 0 = Z(k) contributes nothing.
      if (partial_norm == 0.0) continue;
      value = partial_sum / root(partial_norm);
    }
    best = std::max(best, value);
  }
  if (x.size() == 1) best = sum / full;
  return best;
}

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0 || hits > trials) throw DomainError("wilson_interval: need 0 <= hits <= trials, trials > 0");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (hits == 0) w.low = 0.0;
  if (hits == trials) w.high = 1.0;
  w.low = std::min(w.low, p);
  w.high = std::max(w.high, p);
  return w;
}

MCEstimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
  const WilsonInterval w = wilson_interval(hits, trials);
  return {hits, trials, static_cast<double>(hits) / static_cast<double>(trials), w.low, w.high, seed};
}

MCEstimate estimate_tail(const SamplerSpec& spec, const StatisticSpec& stat, double threshold) {
  if (!std::isfinite(threshold)) throw DomainError("estimate_tail: threshold must be finite");
  if (spec.trials < kMinTrials) throw DomainError("estimate_tail: trials must be >= 1000");
  const Sampler sampler(spec);
  const auto counts = parallel_count<1>(spec.trials, spec.workers,
                                        [&](std::uint64_t first, std::uint64_t last, std::array<std::uint64_t, 1>& c) {
                                          std::vector<double> x(static_cast<std::size_t>(spec.n));
                                          for (std::uint64_t t = first; t < last; ++t) {
                                            sampler.draw(t, x);
                                            if (statistic(x, stat) > threshold) ++c[0];
                                          }
                                        });
  return make_estimate(counts[0], spec.trials, spec.seed);
}

MaxVsSumReport compare_max_vs_sum(const SamplerSpec& spec, int n, double epsilon) {
  if (spec.n != n) throw DomainError("compare_max_vs_sum: sampler dimension differs from n");
  if (spec.trials < kMinTrials) throw DomainError("compare_max_vs_sum: trials must be >= 1000");
  if (!(epsilon >= 0.0)) throw DomainError("compare_max_vs_sum: eps must be >= 0");
  const Sampler sampler(spec);
  const double level = std::sqrt(static_cast<double>(n)) - epsilon;
  const StatisticSpec sum{2.0, StatisticVariant::sum};
  const StatisticSpec max_zn{2.0, StatisticVariant::max_over_zn};
  const StatisticSpec max_zk{2.0, StatisticVariant::max_over_zk};

  // counters: R, R-bar, Q, max-only, either, both
  const auto c = parallel_count<6>(spec.trials, spec.workers,
                                   [&](std::uint64_t first, std::uint64_t last, std::array<std::uint64_t, 6>& k) {
                                     std::vector<double> x(static_cast<std::size_t>(n));
                                     for (std::uint64_t t = first; t < last; ++t) {
                                       sampler.draw(t, x);
                                       const bool r = statistic(x, max_zn) > level;
                                       const bool rb = statistic(x, max_zk) > level;
                                       const bool q = statistic(x, sum) > level;
                                       k[0] += r;
                                       k[1] += rb;
                                       k[2] += q;
                                       k[3] += r && !q;
                                       k[4] += r || q;
                                       k[5] += r && q;
                                     }
                                   });
  MaxVsSumReport report;
  report.r = make_estimate(c[0], spec.trials, spec.seed);
  report.r_bar = make_estimate(c[1], spec.trials, spec.seed);
  report.q = make_estimate(c[2], spec.trials, spec.seed);
  report.max_only = c[3];
  report.either = c[4];
  report.coincidence_rate = c[4] == 0 ? 1.0 : static_cast<double>(c[5]) / static_cast<double>(c[4]);
  report.all_coincide = c[4] == c[5];
  if (c[0] > 0 && c[2] > 0) {
    // Q-events are a subset of R-events: R/Q = 1/p with p = P(Q | R).
    const WilsonInterval w = wilson_interval(c[2], c[0]);
    report.ratio = static_cast<double>(c[0]) / static_cast<double>(c[2]);
    report.ratio_ci_low = 1.0 / w.high;
    report.ratio_ci_high = w.low > 0.0 ? 1.0 / w.low : std::numeric_limits<double>::infinity();
  } else {
    report.ratio = std::numeric_limits<double>::quiet_NaN();
    report.ratio_ci_low = 0.0;
    report.ratio_ci_high = std::numeric_limits<double>::infinity();
    report.warnings.emplace_back("no sum-event hits; ratio undefined");
  }
  report.in_window = epsilon > 0.0 && epsilon < 0.5 / std::sqrt(static_cast<double>(n - 1));
  if (!report.in_window) report.warnings.emplace_back("eps outside (0, 1/(2 sqrt(n-1)))");
  return report;
}

}  // namespace sntail::mc
