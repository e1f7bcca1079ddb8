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
#ifndef FEDNET_PRIVACY_H_
#define FEDNET_PRIVACY_H_

#include "fednet/common.h"

namespace fednet::privacy {

// Geometric per-iteration zCDP budgets phi(n) = phi1 / tau^(n-1),
// n = 1..T. Budgets grow, so the injected noise shrinks over rounds.
struct PrivacySchedule {
  double phi1 = 0.0;
  double tau = 0.5;
  int T = 1;

  void Validate() const;
  double Budget(int n) const;
};

// Inputs to the closed-form l2 sensitivity of one linearized primal update.
struct SensitivityContext {
  double c1 = 0.0;
  int num_samples = 1;  // M_k
  double rho = 1.0;
  int degree = 1;       // |N_k|
  double eta = 1.0;     // step size at the current round
};

// 2 c1 / (M_k (2 rho |N_k| + 1 / eta)).
double L2Sensitivity(const SensitivityContext& ctx);

// Gaussian-mechanism variance achieving phi-zCDP: delta2^2 / (2 phi).
double NoiseVariance(double delta2, double phi);

// Sum of the schedule's budgets, phi1 (1 - tau^T) / (tau^(T-1) - tau^T).
double TotalZcdp(const PrivacySchedule& schedule);

// rho-zCDP implies (rho + 2 sqrt(rho ln(1/delta)), delta)-DP.
double ZcdpToEpsDelta(double phi_total, double delta);

// Initial budget phi1 whose schedule converts to exactly eps_target.
double CalibratePhi1(double eps_target, double delta, double tau, int T);

// Classical Gaussian mechanism, valid for eps_i in (0, 1]:
// sigma = delta2 sqrt(2 ln(1.25 / delta_i)) / eps_i.
double ClassicalGaussianSigma(double delta2, double eps_i, double delta_i);

// w + N(0, sigma2 I). sigma2 == 0 returns w without consuming randomness.
Vector Perturb(const Vector& w, double sigma2, Rng& rng);

}  // namespace fednet::privacy

#endif  // FEDNET_PRIVACY_H_
