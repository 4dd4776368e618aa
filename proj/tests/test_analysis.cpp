#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rdag/analysis.hpp"
#include "rdag/error.hpp"

namespace rdag {
namespace {

TEST(ConvergenceStep, Examples) {
  const std::vector<double> e{3, 1, 1e-5, 1e-6, 1e-7, 1e-8};
  EXPECT_EQ(convergence_step(e, 1e-4, 2), 2);
  EXPECT_EQ(convergence_time(e, 0.5, 1e-4, 2), 1.0);

  const std::vector<double> zero(10, 0.0);
  EXPECT_EQ(convergence_time(zero, 0.01, 1e-3, 5), 0.0);

  std::vector<double> osc;
  for (int k = 0; k < 100; ++k) osc.push_back(k % 2 ? 2e-3 : 5e-4);
  EXPECT_FALSE(convergence_step(osc, 1e-3, 1).has_value());
}

TEST(ConvergenceStep, WindowMustFitInTrace) {
  const std::vector<double> e{3, 1, 0, 0};
  EXPECT_EQ(convergence_step(e, 1e-3, 1), 2);
  EXPECT_FALSE(convergence_step(e, 1e-3, 2).has_value());
  EXPECT_FALSE(convergence_step(std::vector<double>{}, 1e-3, 0).has_value());
}

TEST(ConvergenceStep, LateSpikeResetsTheWindow) {
  std::vector<double> e(8, 0.0);
  e[2] = 1.0;
  EXPECT_EQ(convergence_step(e, 1e-3, 3), 3);
}

TEST(T1Bound, PlugIn) {
  const double b = continuous_T1_bound(2.0, 0.5, 11, 5, 0.8);
  EXPECT_NEAR(continuous_rate_constant(0.5, 11, 5), 0.5 / 11, 1e-15);
  EXPECT_NEAR(b, 126.36, 0.005);
  EXPECT_NEAR(b, std::pow(2.0, 0.2) / (0.5 / 11 * 0.2), 1e-9);
}

TEST(T1Bound, ZeroErrorAndBoundary) {
  EXPECT_EQ(continuous_T1_bound(0.0, 0.5, 11, 5, 0.8), 0.0);
  for (int F : {0, 1, 4, 9}) {
    const int R = 2 * F + 1;
    EXPECT_NEAR(continuous_rate_constant(1.0, R, F), 1.0 / R, 1e-15);
    EXPECT_TRUE(std::isfinite(continuous_T1_bound(1.0, 1.0, R, F, 0.5)));
  }
}

TEST(T1Bound, HypothesisViolations) {
  EXPECT_THROW(continuous_T1_bound(1.0, 0.5, 10, 5, 0.8), HypothesisError);
  EXPECT_THROW(continuous_rate_constant(0.0, 11, 5), ParameterError);
  EXPECT_THROW(continuous_T1_bound(1.0, 0.5, 11, 5, 1.0), ParameterError);
}

TEST(DiscreteContraction, PlugIn) {
  EXPECT_NEAR(discrete_contraction_factor(1.0, 11, 5), 10.0 / 11.0, 1e-15);
  EXPECT_NEAR(discrete_contraction_factor(1.0, 11, 5), 0.9091, 1e-4);
  EXPECT_EQ(discrete_contraction_factor(1.0, 1, 0), 0.0);
  EXPECT_NEAR(discrete_contraction_factor(0.5, 11, 5), 0.9545, 1e-4);
  EXPECT_THROW(discrete_contraction_factor(1.0, 10, 5), HypothesisError);
}

TEST(GeometricEnvelope, TightExample) {
  const double a = geometric_series_envelope(1.0, 0.5, 0.75);
  EXPECT_NEAR(a, 1.0 / (std::numbers::e * std::log(1.5)), 1e-15);
  EXPECT_NEAR(a, 0.9073, 1e-4);
  const double kstar = -1.0 / std::log(0.5 / 0.75);
  EXPECT_NEAR(kstar, 2.466, 1e-3);
  EXPECT_NEAR(kstar * std::pow(0.5 / 0.75, kstar), a, 1e-12);
}

TEST(GeometricEnvelope, Scaling) {
  EXPECT_EQ(geometric_series_envelope(0.0, 0.5, 0.75), 0.0);
  EXPECT_NEAR(geometric_series_envelope(1e-9, 0.5, 0.75), 1e-9 * 0.9073, 1e-13);
}

TEST(GeometricEnvelope, InvalidArguments) {
  EXPECT_THROW(geometric_series_envelope(1.0, 0.75, 0.75), ParameterError);
  EXPECT_THROW(geometric_series_envelope(1.0, 0.8, 0.75), ParameterError);
  EXPECT_THROW(geometric_series_envelope(1.0, 0.0, 0.75), ParameterError);
  EXPECT_THROW(geometric_series_envelope(1.0, 0.5, 1.0), ParameterError);
  EXPECT_THROW(geometric_series_envelope(-1.0, 0.5, 0.75), ParameterError);
}

TEST(GeometricEnvelope, RandomSweep) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = 0.01 + 0.97 * u(rng);
    const double beta = c + (0.999 - c) * (0.01 + 0.99 * u(rng));
    const double b0 = 100 * u(rng);
    const double a = geometric_series_envelope(b0, c, beta);
    for (int k = 0; k <= 10000; ++k) {
      // Divided through by beta^k so neither side underflows.
      const double lhs = k * std::pow(c / beta, k) * b0;
      ASSERT_LE(lhs, a * (1 + 1e-12)) << "c=" << c << " beta=" << beta << " k=" << k;
    }
  }
}

}  // namespace
}  // namespace rdag
