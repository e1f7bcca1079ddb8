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
#ifndef FEDNET_CONFIG_H_
#define FEDNET_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fednet/harness.h"

namespace fednet::config {

// Flat JSON schema; keys mirror ExperimentConfig:
//   problem, K, M_k, P, avg_degree, topology_seed, noise_std, lambda,
//   lambda1 ("auto" or number), lambda2, c1, analytic_c1, algos, rho, eta0,
//   eta_exponent, alpha0, tau, T, epsilon (null = noiseless), eps_grid,
//   delta, n_seeds, seed, trials
// Unknown keys are rejected with a ParameterError naming the key.
harness::ExperimentConfig FromJson(const nlohmann::json& j);
nlohmann::json ToJson(const harness::ExperimentConfig& cfg);

harness::ExperimentConfig LoadFile(const std::string& path);

// Applies "key=value" on top of the JSON object. The value is parsed as
// JSON when possible and taken as a string otherwise.
void ApplyOverride(nlohmann::json& j, std::string_view assignment);

}  // namespace fednet::config

#endif  // FEDNET_CONFIG_H_
