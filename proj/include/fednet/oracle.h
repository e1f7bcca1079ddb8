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
#ifndef FEDNET_ORACLE_H_
#define FEDNET_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fednet/common.h"
#include "fednet/objectives.h"

namespace fednet::harness {

struct SyntheticData {
  std::vector<Dataset> datasets;
  Vector true_w;
};

// true_w ~ N(0, I_P); X_k has i.i.d. N(0, 1) entries;
// y_k = X_k true_w + N(0, noise_std^2 I).
SyntheticData GenerateSynthetic(int num_clients, int samples_per_client, int num_features,
                                double noise_std, uint64_t seed);

// 0.001 ||X^T y||_inf over the pooled data of all clients.
double DefaultLambda1(std::span<const Dataset> datasets);

// sum_k f_k(w) for a single shared model.
double GlobalObjective(std::span<const Dataset> datasets, const ProblemSpec& spec,
                       const Vector& w);

// Minimizer of GlobalObjective.
//   squared + {none, l2}:  direct linear solve
//   squared + elastic net: proximal gradient (soft-thresholding) until the
//                          iterate moves less than tol
//   absolute + {none, l2}: iteratively reweighted least squares with a
//                          shrinking floor, then a vertex polish
// tol <= 0 selects the default (1e-8, or 1e-6 for the absolute loss).
// Throws RuntimeFailure after max_iterations without meeting tol.
Vector CentralizedOracle(std::span<const Dataset> datasets, const ProblemSpec& spec,
                         double tol = -1.0, int max_iterations = 1'000'000);

// sum_k ||w_k - w_c||^2 / ||w_c||^2.
double NormalizedError(std::span<const Vector> models, const Vector& wc);

}  // namespace fednet::harness

#endif  // FEDNET_ORACLE_H_
