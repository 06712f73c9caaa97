// SPDX-License-Identifier: Apache-2.0
#include "sntail/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sntail/error.hpp"

namespace sntail::optimize {
namespace {

struct Candidate {
  double score;  // minimized internally
  std::vector<double> offset;
};

class Problem {
public:
  Problem(const Objective& f, const Ball& ball, Goal goal)
      : f_(f), ball_(ball), sign_(goal == Goal::minimize ? 1.0 : -1.0), point_(ball.center.size()) {}

  std::size_t dimension() const { return ball_.center.size(); }
  std::size_t evaluations() const { return evaluations_; }

  bool feasible(std::span<const double> w) const {
    const double r = norm(w);
    return r <= ball_.radius * (1.0 + 1e-15) && r >= ball_.inner_radius;
  }

  // Radial projection onto the annulus.
  void project(std::vector<double>& w) const {
    const double r = norm(w);
    if (r == 0.0) return;
    double target = r;
    if (r > ball_.radius) target = ball_.radius;
    if (r < ball_.inner_radius) target = ball_.inner_radius;
    if (target != r) {
      for (double& x : w) x *= target / r;
    }
  }

  double score(std::span<const double> w) {
    for (std::size_t j = 0; j < w.size(); ++j) point_[j] = ball_.center[j] + w[j];
    ++evaluations_;
    return sign_ * f_(point_);
  }

  // Compass search with radial projection; returns true on convergence.
  bool refine(Candidate& c, double tolerance, std::size_t budget) {
    double step = 0.1 * ball_.radius;
    const std::size_t start = evaluations_;
    std::vector<double> trial;
    while (step > tolerance * ball_.radius) {
      if (evaluations_ - start > budget) return false;
      bool improved = false;
      for (std::size_t j = 0; j < dimension() && !improved; ++j) {
        for (double dir : {1.0, -1.0}) {
          trial = c.offset;
          trial[j] += dir * step;
          project(trial);
          if (!feasible(trial)) continue;
          const double s = score(trial);
          if (s < c.score) {
            c.score = s;
            c.offset = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return true;
  }

  static double norm(std::span<const double> w) {
    double s = 0.0;
    for (double x : w) s += x * x;
    return std::sqrt(s);
  }

private:
  const Objective& f_;
  const Ball& ball_;
  double sign_;
  std::vector<double> point_;
  std::size_t evaluations_ = 0;
};

std::vector<Candidate> grid_candidates(Problem& problem, const Ball& ball, int per_axis, int keep) {
  const std::size_t d = problem.dimension();
  std::vector<Candidate> best;
  std::vector<int> index(d, 0);
  std::vector<double> w(d);
  const double h = 2.0 * ball.radius / (per_axis - 1);
  while (true) {
    for (std::size_t j = 0; j < d; ++j) w[j] = -ball.radius + h * index[j];
    if (problem.feasible(w)) {
      const double s = problem.score(w);
      if (static_cast<int>(best.size()) < keep || s < best.back().score) {
        best.push_back({s, w});
        std::sort(best.begin(), best.end(), [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
        if (static_cast<int>(best.size()) > keep) best.pop_back();
      }
    }
    std::size_t j = 0;
    while (j < d && ++index[j] == per_axis) index[j++] = 0;
    if (j == d) break;
  }
  return best;
}

std::vector<Candidate> multistart_candidates(Problem& problem, const Ball& ball, const Options& options) {
  const std::size_t d = problem.dimension();
  std::vector<std::vector<double>> starts;
  for (std::size_t j = 0; j < d; ++j) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> w(d, 0.0);
      w[j] = s * ball.radius;
      starts.push_back(w);
    }
  }
  for (double s : {1.0, -1.0}) starts.emplace_back(d, s * ball.radius / std::sqrt(static_cast<double>(d)));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  while (static_cast<int>(starts.size()) < options.starts) {
    std::vector<double> w(d);
    for (double& x : w) x = normal(rng);
    const double r = Problem::norm(w);
    const double radius = ball.radius * std::pow(uniform(rng), 1.0 / static_cast<double>(d));
    for (double& x : w) x *= radius / r;
    starts.push_back(std::move(w));
  }
  std::vector<Candidate> out;
  for (auto& w : starts) {
    problem.project(w);
    if (!problem.feasible(w)) continue;
    out.push_back({problem.score(w), w});
  }
  return out;
}

}  // namespace

Result optimize_on_ball(const Objective& f, const Ball& ball, Goal goal, const Options& options) {
  const std::size_t d = ball.center.size();
  if (d == 0) throw DomainError("optimize_on_ball: empty center");
  if (!(ball.radius > 0.0) || !(ball.inner_radius >= 0.0) || !(ball.inner_radius < ball.radius))
    throw DomainError("optimize_on_ball: invalid radii");

  Problem problem(f, ball, goal);
  std::vector<Candidate> candidates;
  if (d <= 3) {
    const int per_axis = d == 1 ? options.grid_points_1d : d == 2 ? options.grid_points_2d : options.grid_points_3d;
    candidates = grid_candidates(problem, ball, per_axis, options.refine_candidates);
  } else {
    candidates = multistart_candidates(problem, ball, options);
  }
  if (candidates.empty()) throw DomainError("optimize_on_ball: no feasible starting point");

  bool certified = true;
  for (auto& c : candidates) {
    certified = problem.refine(c, options.step_tolerance, options.max_local_evaluations) && certified;
  }
  // Order-free reduction: best score, ties broken by candidate order.
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
  Result r;
  r.value = goal == Goal::minimize ? best->score : -best->score;
  r.argument.resize(d);
  for (std::size_t j = 0; j < d; ++j) r.argument[j] = ball.center[j] + best->offset[j];
  r.evaluations = problem.evaluations();
  r.certified = certified;
  return r;
}

}  // namespace sntail::optimize
