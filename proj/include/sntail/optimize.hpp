// SPDX-License-Identifier: Apache-2.0
//
// Global search for smooth objectives on a (possibly punctured) Euclidean
// ball of low dimension: tensor grid plus local refinement up to three
// dimensions, deterministic multistart above.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sntail::optimize {

using Objective = std::function<double(std::span<const double>)>;

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
  double inner_radius = 0.0;  ///< points closer than this to the center are excluded
};

enum class Goal { minimize, maximize };

struct Options {
  int grid_points_1d = 401;
  int grid_points_2d = 401;
  int grid_points_3d = 101;
  int refine_candidates = 8;
  int starts = 64;              ///< multistart count for dimension >= 4
  std::uint64_t seed = 20170101;
  double step_tolerance = 1e-10;  ///< relative to the radius
  std::size_t max_local_evaluations = 50000;
};

struct Result {
  double value = 0.0;
  std::vector<double> argument;
  std::size_t evaluations = 0;
  bool certified = false;  ///< every local refinement converged within budget
};

Result optimize_on_ball(const Objective& f, const Ball& ball, Goal goal, const Options& options = {});

}  // namespace sntail::optimize
