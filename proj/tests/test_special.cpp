// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "sntail/error.hpp"
#include "sntail/special.hpp"

using namespace sntail;

// Boost's ibeta is an independent implementation of the same function.
TEST(IncompleteBeta, MatchesBoostAcrossParameterSweep) {
  for (double a : {0.5, 1.0, 1.5, 2.5, 7.0, 30.0}) {
    for (double b : {0.5, 1.0, 3.0, 12.0}) {
      for (double x : {1e-9, 1e-4, 0.01, 0.2, 0.5, 0.77, 0.99, 1 - 1e-6}) {
        const double expected = boost::math::ibeta(a, b, x);
        EXPECT_NEAR(incomplete_beta(a, b, x), expected, 1e-13 + 1e-12 * expected)
            << a << " " << b << " " << x;
      }
    }
  }
}

TEST(IncompleteBeta, ReflectionIdentity) {
  for (double a : {0.5, 1.5, 4.0, 19.5}) {
    for (double b : {0.5, 2.0, 9.0}) {
      for (double x = 0.01; x < 1.0; x += 0.0371) {
        EXPECT_NEAR(incomplete_beta(a, b, x) + incomplete_beta(b, a, 1.0 - x), 1.0, 1e-13);
      }
    }
  }
}

TEST(IncompleteBeta, ClosedForms) {
  // I_x(1, 1/2) = 1 - sqrt(1 - x); I_x(1/2, 1/2) = 2 asin(sqrt x) / pi.
  for (double x : {1e-6, 0.1, 0.5, 0.9}) {
    EXPECT_NEAR(incomplete_beta(1.0, 0.5, x), 1.0 - std::sqrt(1.0 - x), 1e-14);
    EXPECT_NEAR(incomplete_beta(0.5, 0.5, x), 2.0 * std::asin(std::sqrt(x)) / std::numbers::pi, 1e-14);
  }
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 1.0), 1.0);
}

TEST(IncompleteBeta, RejectsInvalidArguments) {
  EXPECT_THROW(incomplete_beta(0.0, 1.0, 0.5), DomainError);
  EXPECT_THROW(incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST(BallVolume, LowDimensions) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
}
