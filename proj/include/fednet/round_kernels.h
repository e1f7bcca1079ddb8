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
#ifndef FEDNET_ROUND_KERNELS_H_
#define FEDNET_ROUND_KERNELS_H_

#include <cstdint>
#include <span>

#include "fednet/consensus.h"

// Per-round kernels behind consensus::Run. Each comes in a serial reference
// form and an OpenMP form; both must produce bit-identical client states.
namespace fednet::consensus::kernels {

// Variant-specific primal step followed by perturbation, for every client.
void LocalStepSerial(std::span<ClientState> clients, const ProblemSpec& spec,
                     const AlgoConfig& cfg, uint64_t seed, int n);
void LocalStepParallel(std::span<ClientState> clients, const ProblemSpec& spec,
                       const AlgoConfig& cfg, uint64_t seed, int n);

// Copies every neighbor's released iterate into the inbox.
void ExchangeSerial(std::span<ClientState> clients, int round);
void ExchangeParallel(std::span<ClientState> clients, int round);

void DualStepSerial(std::span<ClientState> clients, const AlgoConfig& cfg);
void DualStepParallel(std::span<ClientState> clients, const AlgoConfig& cfg);

}  // namespace fednet::consensus::kernels

#endif  // FEDNET_ROUND_KERNELS_H_
