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
#include "fednet/round_kernels.h"

#include <exception>
#include <string>

namespace fednet::consensus::kernels {
namespace {

void LocalStepOne(ClientState& c, const ProblemSpec& spec, const AlgoConfig& cfg,
                  uint64_t seed, int n) {
  Require(c.round == n - 1 && c.inbox_round == n - 1,
          "client " + std::to_string(c.index) + " is not ready for round " +
              std::to_string(n));
  Vector next;
  switch (cfg.variant) {
    case Variant::kZcdpNfl:
    case Variant::kEpsDeltaNfl:
      next = PrimalUpdate(c, spec, cfg, n);
      break;
    case Variant::kZcdpGradNfl:
      next = GradUpdate(c, spec, cfg, n);
      break;
    case Variant::kPAdmm:
      next = ExactPrimalUpdate(c, spec, cfg, n);
      break;
  }
  const double sigma2 = RoundNoiseVariance(c, spec, cfg, n);
  Rng rng = MakeStream(seed, static_cast<uint64_t>(c.index), static_cast<uint64_t>(n));
  c.w_shared = privacy::Perturb(next, sigma2, rng);
  c.w = std::move(next);
  c.round = n;
}

void ExchangeOne(std::span<ClientState> clients, ClientState& c, int round) {
  c.inbox.resize(c.neighbors.size());
  for (size_t i = 0; i < c.neighbors.size(); ++i) {
    const ClientState& src = clients[c.neighbors[i]];
    c.inbox[i] = src.w_shared;
  }
  c.inbox_round = round;
}

}  // namespace

void LocalStepSerial(std::span<ClientState> clients, const ProblemSpec& spec,
                     const AlgoConfig& cfg, uint64_t seed, int n) {
  for (ClientState& c : clients) LocalStepOne(c, spec, cfg, seed, n);
}

void LocalStepParallel(std::span<ClientState> clients, const ProblemSpec& spec,
                       const AlgoConfig& cfg, uint64_t seed, int n) {
  const auto count = static_cast<std::ptrdiff_t>(clients.size());
  // Exceptions cannot cross the OpenMP region boundary.
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      LocalStepOne(clients[k], spec, cfg, seed, n);
    } catch (...) {
#pragma omp critical(fednet_round_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void ExchangeSerial(std::span<ClientState> clients, int round) {
  for (ClientState& c : clients) ExchangeOne(clients, c, round);
}

void ExchangeParallel(std::span<ClientState> clients, int round) {
  const auto count = static_cast<std::ptrdiff_t>(clients.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) ExchangeOne(clients, clients[k], round);
}

void DualStepSerial(std::span<ClientState> clients, const AlgoConfig& cfg) {
  for (ClientState& c : clients) c.gamma = DualUpdate(c, cfg);
}

void DualStepParallel(std::span<ClientState> clients, const AlgoConfig& cfg) {
  const auto count = static_cast<std::ptrdiff_t>(clients.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      clients[k].gamma = DualUpdate(clients[k], cfg);
    } catch (...) {
#pragma omp critical(fednet_round_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace fednet::consensus::kernels
