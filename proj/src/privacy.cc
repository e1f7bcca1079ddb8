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

namespace fednet::privacy {
namespace {

void CheckTau(double tau) {
  Require(tau > 0.0 && tau < 1.0, "tau must lie in (0, 1)");
}

void CheckDelta(double delta) {
  Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
}

// sum_{j=0}^{T-1} tau^-j, evaluated as expm1(-T ln tau) * tau / (1 - tau)
// to keep full precision when tau is close to 1.
double GeometricGrowthSum(double tau, int T) {
  return std::expm1(-T * std::log(tau)) * tau / (1.0 - tau);
}

}  // namespace

void PrivacySchedule::Validate() const {
  Require(phi1 > 0.0, "phi1 must be positive");
  CheckTau(tau);
  Require(T >= 1, "T must be at least 1");
}

double PrivacySchedule::Budget(int n) const {
  Require(n >= 1, "budget index starts at 1");
  return phi1 * std::pow(tau, -(n - 1));
}

double L2Sensitivity(const SensitivityContext& ctx) {
  Require(ctx.c1 >= 0.0, "c1 must be nonnegative");
  Require(ctx.num_samples > 0 && ctx.rho > 0.0 && ctx.degree > 0 && ctx.eta > 0.0,
          "sensitivity context requires positive M_k, rho, degree and eta");
  return 2.0 * ctx.c1 /
         (ctx.num_samples * (2.0 * ctx.rho * ctx.degree + 1.0 / ctx.eta));
}

double NoiseVariance(double delta2, double phi) {
  Require(phi > 0.0, "per-iteration budget phi must be positive");
  Require(delta2 >= 0.0, "sensitivity must be nonnegative");
  return delta2 * delta2 / (2.0 * phi);
}

double TotalZcdp(const PrivacySchedule& schedule) {
  schedule.Validate();
  return schedule.phi1 * GeometricGrowthSum(schedule.tau, schedule.T);
}

double ZcdpToEpsDelta(double phi_total, double delta) {
  CheckDelta(delta);
  Require(phi_total >= 0.0, "total zCDP must be nonnegative");
  return phi_total + 2.0 * std::sqrt(phi_total * std::log(1.0 / delta));
}

double CalibratePhi1(double eps_target, double delta, double tau, int T) {
  Require(eps_target > 0.0, "target epsilon must be positive");
  CheckDelta(delta);
  CheckTau(tau);
  Require(T >= 1, "T must be at least 1");
  // Solve phi + 2 sqrt(phi L) = eps for sqrt(phi); the rationalized root
  // avoids cancellation when eps << L.
  const double log_inv = std::log(1.0 / delta);
  const double root = eps_target / (std::sqrt(log_inv + eps_target) + std::sqrt(log_inv));
  return root * root / GeometricGrowthSum(tau, T);
}

double ClassicalGaussianSigma(double delta2, double eps_i, double delta_i) {
  Require(eps_i > 0.0 && eps_i <= 1.0,
          "classical Gaussian mechanism requires per-release epsilon in (0, 1]");
  CheckDelta(delta_i);
  Require(delta2 >= 0.0, "sensitivity must be nonnegative");
  return delta2 * std::sqrt(2.0 * std::log(1.25 / delta_i)) / eps_i;
}

Vector Perturb(const Vector& w, double sigma2, Rng& rng) {
  Require(sigma2 >= 0.0, "noise variance must be nonnegative");
  if (sigma2 == 0.0) return w;
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  Vector out = w;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += noise(rng);
  return out;
}

}  // namespace fednet::privacy
