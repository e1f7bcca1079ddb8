/*
 * Copyright 2026 The FedNet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "fednet/privacy.h"

#include <cmath>

#include "gtest/gtest.h"

namespace fednet::privacy {
namespace {

double LoopSum(double phi1, double tau, int T) {
  double sum = 0.0;
  double phi = phi1;
  for (int n = 1; n <= T; ++n) {
    sum += phi;
    phi /= tau;
  }
  return sum;
}

TEST(L2SensitivityTest, Examples) {
  EXPECT_DOUBLE_EQ(L2Sensitivity({0.0, 50, 1.0, 3, 0.1}), 0.0);
  EXPECT_NEAR(L2Sensitivity({1.0, 50, 1.0, 3, 0.1}), 0.0025, 1e-15);
  EXPECT_NEAR(L2Sensitivity({2.0, 10, 0.5, 2, 1.0}), 4.0 / 30.0, 1e-15);
}

TEST(L2SensitivityTest, RejectsNonpositiveParameters) {
  EXPECT_THROW(L2Sensitivity({1.0, 0, 1.0, 3, 0.1}), ParameterError);
  EXPECT_THROW(L2Sensitivity({1.0, 50, 0.0, 3, 0.1}), ParameterError);
  EXPECT_THROW(L2Sensitivity({1.0, 50, 1.0, 0, 0.1}), ParameterError);
  EXPECT_THROW(L2Sensitivity({1.0, 50, 1.0, 3, 0.0}), ParameterError);
  EXPECT_THROW(L2Sensitivity({-1.0, 50, 1.0, 3, 0.1}), ParameterError);
}

TEST(NoiseVarianceTest, Examples) {
  EXPECT_DOUBLE_EQ(NoiseVariance(0.0, 0.3), 0.0);
  EXPECT_NEAR(NoiseVariance(0.0025, 0.01), 3.125e-4, 1e-18);
  EXPECT_DOUBLE_EQ(NoiseVariance(1.0, 0.5), 1.0);
  EXPECT_THROW(NoiseVariance(1.0, 0.0), ParameterError);
}

TEST(TotalZcdpTest, Examples) {
  EXPECT_DOUBLE_EQ(TotalZcdp({0.3, 0.7, 1}), 0.3);
  EXPECT_NEAR(TotalZcdp({0.01, 0.5, 3}), 0.07, 1e-15);
  EXPECT_NEAR(TotalZcdp({0.1, 0.9, 2}), 0.1 + 0.1 / 0.9, 1e-15);
  EXPECT_THROW(TotalZcdp({0.1, 1.0, 2}), ParameterError);
  EXPECT_THROW(TotalZcdp({0.1, 0.0, 2}), ParameterError);
}

TEST(TotalZcdpTest, MatchesLoopSum) {
  for (double tau : {0.3, 0.5, 0.9, 0.98, 0.999999}) {
    for (int T = 1; T <= 100; ++T) {
      const double expected = LoopSum(0.013, tau, T);
      EXPECT_NEAR(TotalZcdp({0.013, tau, T}), expected, 1e-12 * expected)
          << "tau=" << tau << " T=" << T;
    }
  }
}

TEST(ZcdpToEpsDeltaTest, Examples) {
  EXPECT_DOUBLE_EQ(ZcdpToEpsDelta(0.0, 0.01), 0.0);
  EXPECT_NEAR(ZcdpToEpsDelta(0.07, 0.01), 1.2055, 1e-4);
  EXPECT_NEAR(ZcdpToEpsDelta(1.0, 0.01), 5.2919, 1e-4);
  EXPECT_THROW(ZcdpToEpsDelta(1.0, 0.0), ParameterError);
  EXPECT_THROW(ZcdpToEpsDelta(1.0, 1.0), ParameterError);
}

TEST(CalibratePhi1Test, Examples) {
  EXPECT_NEAR(CalibratePhi1(1.2055, 0.01, 0.5, 3), 0.01, 1e-5);
  EXPECT_NEAR(CalibratePhi1(ZcdpToEpsDelta(0.07, 0.01), 0.01, 0.5, 3), 0.01, 1e-14);
  EXPECT_NEAR(CalibratePhi1(5.2919, 0.01, 0.5, 1), 1.0, 1e-4);
  EXPECT_THROW(CalibratePhi1(0.0, 0.01, 0.5, 3), ParameterError);
}

TEST(CalibratePhi1Test, RoundTripsEpsilon) {
  for (double eps : {0.1, 0.5, 1.0, 4.0, 20.0}) {
    for (double tau : {0.2, 0.5, 0.8, 0.95, 0.999}) {
      for (int T : {1, 2, 10, 50, 200}) {
        const double phi1 = CalibratePhi1(eps, 1e-5, tau, T);
        EXPECT_NEAR(ZcdpToEpsDelta(TotalZcdp({phi1, tau, T}), 1e-5), eps, 1e-9);
      }
    }
  }
}

TEST(ClassicalGaussianSigmaTest, Examples) {
  EXPECT_DOUBLE_EQ(ClassicalGaussianSigma(0.0, 1.0, 1e-5), 0.0);
  const double expected = std::sqrt(2.0 * std::log(1.25e5));  // 4.84481
  EXPECT_NEAR(ClassicalGaussianSigma(1.0, 1.0, 1e-5), expected, 1e-12);
  EXPECT_NEAR(ClassicalGaussianSigma(1.0, 1.0, 1e-5), 4.8446, 5e-4);
  EXPECT_NEAR(ClassicalGaussianSigma(0.5, 0.5, 1e-5), expected, 1e-12);
  EXPECT_THROW(ClassicalGaussianSigma(1.0, 1.5, 1e-5), ParameterError);
  EXPECT_THROW(ClassicalGaussianSigma(1.0, 0.5, 0.0), ParameterError);
}

TEST(PerturbTest, ZeroVarianceIsIdentity) {
  Rng rng(1);
  const Vector w = Vector::LinSpaced(5, -1.0, 1.0);
  EXPECT_EQ(Perturb(w, 0.0, rng), w);
  EXPECT_THROW(Perturb(w, -1.0, rng), ParameterError);
}

TEST(PerturbTest, DeterministicForSeed) {
  Rng a(42);
  Rng b(42);
  const Vector w = Vector::Zero(6);
  EXPECT_EQ(Perturb(w, 0.3, a), Perturb(w, 0.3, b));
}

TEST(PerturbTest, MonteCarloMoments) {
  Rng rng(2024);
  constexpr int kDraws = 100000;
  const Vector w = Vector::Zero(4);
  Vector sum = Vector::Zero(4);
  Vector sum_sq = Vector::Zero(4);
  for (int i = 0; i < kDraws; ++i) {
    const Vector x = Perturb(w, 1.0, rng);
    sum += x;
    sum_sq += x.cwiseProduct(x);
  }
  const Vector mean = sum / kDraws;
  const Vector var = (sum_sq - kDraws * mean.cwiseProduct(mean)) / (kDraws - 1);
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(mean(c), 0.0, 0.02);
    EXPECT_GE(var(c), 0.97);
    EXPECT_LE(var(c), 1.03);
  }
}

TEST(ScheduleTest, NoiseVarianceDecreasesOverRounds) {
  Rng rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PrivacySchedule s{0.001 + unit(rng), 0.05 + 0.9 * unit(rng), 100};
    const double eta0 = 0.01 + 10.0 * unit(rng);
    const double q = 0.05 + 0.95 * unit(rng);
    double previous = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= s.T; ++n) {
      const double eta = eta0 / std::pow(n, q);
      const double sigma2 = NoiseVariance(L2Sensitivity({1.0, 50, 1.0, 3, eta}), s.Budget(n));
      EXPECT_LT(sigma2, previous);
      previous = sigma2;
    }
  }
}

}  // namespace
}  // namespace fednet::privacy
