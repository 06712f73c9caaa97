// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sntail/asymptotics.hpp"
#include "sntail/error.hpp"

using namespace sntail;
using namespace sntail::asymptotics;
using density::DensityModel;

TEST(KConstant, LowDimensionValues) {
  EXPECT_NEAR(k_constant(2, 2.0, Variant::paper).value, std::pow(2.0, 1.25), 1e-13);
  EXPECT_NEAR(k_constant(2, 2.0, Variant::corrected).value, std::pow(2.0, 2.25), 1e-13);
  EXPECT_NEAR(k_constant(3, 2.0, Variant::corrected).value, 6.0 * std::numbers::pi, 1e-12);
}

TEST(KConstant, BetaFormContinuousAtTwo) {
  for (int n = 2; n <= 10; ++n) {
    for (auto v : {Variant::paper, Variant::corrected}) {
      const double a = k_constant(n, 2.0, v).value;
      EXPECT_NEAR(k_constant_beta_form(n, 2.0, v).value, a, 1e-12 * a);
    }
  }
}

TEST(KConstant, LogDomainContinuousAcrossSwitch) {
  for (int n : {49, 50, 51, 52}) {
    const KConstant k = k_constant(n, 2.0, Variant::corrected);
    EXPECT_NEAR(std::log(k.value), k.log_value, 1e-10);
  }
  EXPECT_TRUE(std::isfinite(k_constant(2000, 3.0, Variant::paper).log_value));
}

TEST(Predict, TwoDimensionalNormalRightTail) {
  const auto m = DensityModel::iid_standard_normal(2);
  const Prediction c = predict_tail(m, {2, 0.01, 2.0, Side::right}, Variant::corrected);
  EXPECT_NEAR(c.constant, std::pow(2.0, 0.25) / std::numbers::pi, 1e-10);
  EXPECT_NEAR(c.exponent, 0.5, 0.0);
  EXPECT_NEAR(c.value, 0.1 * std::pow(2.0, 0.25) / std::numbers::pi, 1e-11);
  const Prediction p = predict_tail(m, {2, 0.01, 2.0, Side::right}, Variant::paper);
  EXPECT_NEAR(p.value / c.value, std::sqrt(std::numbers::pi), 1e-9);
}

TEST(Predict, ThreeDimensionalExactConstant) {
  const auto m = DensityModel::iid_standard_normal(3);
  const Prediction c = predict_tail(m, {3, 0.1, 2.0, Side::right}, Variant::corrected);
  EXPECT_NEAR(c.constant, 0.28867513459481288, 1e-10);
  EXPECT_DOUBLE_EQ(c.exponent, 1.0);
}

TEST(Predict, SidesForSymmetricAndPositiveLaws) {
  const auto normal = DensityModel::iid_standard_normal(3);
  const double right = predict_tail(normal, {3, 0.1, 2.0, Side::right}, Variant::corrected).value;
  const double left = predict_tail(normal, {3, 0.1, 2.0, Side::left}, Variant::corrected).value;
  const double both = predict_tail(normal, {3, 0.1, 2.0, Side::two_sided}, Variant::corrected).value;
  EXPECT_NEAR(left, right, 1e-10 * right);
  EXPECT_NEAR(both, 2.0 * right, 1e-10 * right);
  const auto positive = DensityModel::iid(density::FoldedNormal{1.0}, 3);
  EXPECT_THROW(predict_tail(positive, {3, 0.1, 2.0, Side::left}, Variant::corrected), DegenerateError);
}

TEST(Predict, ValidatesQuery) {
  const auto m = DensityModel::iid_standard_normal(3);
  EXPECT_THROW(predict_tail(m, {3, 1.5, 2.0, Side::right}, Variant::corrected), DomainError);
  EXPECT_THROW(predict_tail(m, {3, 0.1, 3.0, Side::left}, Variant::corrected), DomainError);
  EXPECT_THROW(predict_tail(m, {4, 0.1, 2.0, Side::right}, Variant::corrected), DomainError);
  const Prediction wide = predict_tail(m, {3, 0.7, 2.0, Side::right}, Variant::corrected);
  EXPECT_FALSE(wide.warnings.empty());
}

TEST(GammaVariant, ReducesToExponentLaw) {
  const Prediction p = predict_gamma_variant({3, 0.0, 0.1});
  EXPECT_DOUBLE_EQ(p.exponent, 1.0);
  const Prediction q = predict_gamma_variant({3, 2.0, 0.1});
  EXPECT_DOUBLE_EQ(q.exponent, 2.0);
  EXPECT_THROW(predict_gamma_variant({3, -2.5, 0.1}), DomainError);
}

TEST(LogGrowth, ConvergesSlowlyToBetaLimit) {
  const auto r = log_growth_check(2.0, {10, 2000});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].second, 0.12984582194101263, 1e-10);
  EXPECT_NEAR(r[1].second, -0.10913917558055665, 1e-10);
  EXPECT_NEAR(log_growth_check(3.0, {2000})[0].second, -0.23800441792835395, 1e-10);
}

TEST(ReferenceBounds, HolderCutoffAndMonotonicity) {
  EXPECT_EQ(reference_bound(ReferenceBound::holder_cutoff, 2.0, 4, 2.0), 0.0);
  EXPECT_EQ(reference_bound(ReferenceBound::holder_cutoff, 1.99, 4, 2.0), 1.0);
  EXPECT_NEAR(reference_bound(ReferenceBound::jing, 1.0, 4, 2.0), std::exp(-0.5), 1e-15);
  // fan equals jing at beta = 2
  EXPECT_NEAR(reference_bound(ReferenceBound::fan, 1.3, 9, 2.0), reference_bound(ReferenceBound::jing, 1.3, 9, 2.0), 1e-15);
  EXPECT_THROW(reference_bound(ReferenceBound::fan, 1.0, 4, 3.0), DomainError);
}
