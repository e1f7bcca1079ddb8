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
#ifndef FEDNET_CONSENSUS_H_
#define FEDNET_CONSENSUS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fednet/common.h"
#include "fednet/graph.h"
#include "fednet/objectives.h"
#include "fednet/privacy.h"

namespace fednet::consensus {

enum class Variant {
  kZcdpNfl,      // linearized ADMM + dynamic zCDP noise
  kEpsDeltaNfl,  // same updates, classical Gaussian mechanism per round
  kZcdpGradNfl,  // Metropolis-mixed subgradient method + dynamic zCDP noise
  kPAdmm,        // exact-minimization ADMM, ridge only
};

std::string ToString(Variant variant);
// Accepts the snake_case identifiers used in configs ("zcdp_nfl", ...).
Variant ParseVariant(std::string_view name);

struct ZcdpPrivacy {
  privacy::PrivacySchedule schedule;
  double delta = 1e-4;
};

// Total (epsilon, delta) split evenly over the T releases.
struct EpsDeltaPrivacy {
  double epsilon = 1.0;
  double delta = 1e-4;
};

using PrivacyConfig = std::variant<std::monostate, ZcdpPrivacy, EpsDeltaPrivacy>;

struct AlgoConfig {
  Variant variant = Variant::kZcdpNfl;
  double rho = 1.0;
  double eta0 = 1.0;
  double eta_exponent = 1.0;  // eta(n) = eta0 / n^q
  double alpha0 = 1.0;        // subgradient baseline: alpha(n) = alpha0 / sqrt(n)
  int T = 200;
  PrivacyConfig privacy;

  double Eta(int n) const;
  double Alpha(int n) const;
  bool IsPrivate() const { return !std::holds_alternative<std::monostate>(privacy); }
  bool IsAdmm() const { return variant != Variant::kZcdpGradNfl; }
  // Rejects inconsistent combinations, e.g. P-ADMM on a non-ridge problem
  // or a zCDP variant configured with a classical budget.
  void Validate(const ProblemSpec& spec) const;
};

// Returns `base` with its privacy configured so the accountant reports a
// total of exactly (epsilon, delta): zCDP variants through CalibratePhi1
// with decay `tau`, the classical variant through basic composition.
AlgoConfig WithMatchedBudget(AlgoConfig base, double epsilon, double delta, double tau);

struct ReportedBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};
// Total guarantee over cfg.T rounds; nullopt for noiseless configs.
std::optional<ReportedBudget> ReportBudget(const AlgoConfig& cfg);

struct ClientState {
  int index = 0;
  Dataset data;
  // Per-sample subgradient bound; feeds both clipping and sensitivity.
  double c1 = 1.0;
  Vector w;         // primal iterate w_k
  Vector w_shared;  // own last released (perturbed) iterate
  Vector gamma;     // dual variable
  std::vector<int> neighbors;
  std::vector<Vector> inbox;  // latest released iterate of each neighbor
  std::vector<double> mixing;  // Metropolis weights, aligned with neighbors
  double self_weight = 1.0;
  int round = 0;         // last completed local step
  int inbox_round = -1;  // round whose messages fill the inbox
};

// Zero-initialized states with neighbor lists and Metropolis weights from
// the topology. c1 is the analytic row-norm bound for the absolute loss
// when `analytic_c1` is set, spec.c1 otherwise.
std::vector<ClientState> InitClients(std::span<const Dataset> datasets,
                                     const graph::Topology& topology,
                                     const ProblemSpec& spec, bool analytic_c1 = true);

// a_kl = 1 / (1 + max(d_k, d_l)) for l in N_k; a_kk = 1 - sum_l a_kl.
// Element 0 is a_kk, followed by the neighbors in ascending order.
std::vector<double> MetropolisWeights(const graph::Topology& topology, int k);

// Subgradient used by every primal rule, evaluated at the client's own
// last released iterate. Clipping applies only to private configs.
Vector ClientSubgrad(const ClientState& state, const ProblemSpec& spec,
                     const AlgoConfig& cfg);

// Exact minimizer of the linearized local subproblem:
//   w = [w~_k / eta + rho sum_l (w~_k + w~_l) - gamma - g] / (2 rho |N| + 1 / eta)
Vector PrimalUpdate(const ClientState& state, const ProblemSpec& spec,
                    const AlgoConfig& cfg, int n);

// gamma + rho sum_l (w~_k - w~_l) over freshly exchanged messages.
Vector DualUpdate(const ClientState& state, const AlgoConfig& cfg);

// sum_l a_kl w~_l + a_kk w~_k - alpha(n) g.
Vector GradUpdate(const ClientState& state, const ProblemSpec& spec,
                  const AlgoConfig& cfg, int n);

// Ridge only: argmin f_k(w) + w^T gamma + rho sum_l ||w - (w~_k + w~_l) / 2||^2.
Vector ExactPrimalUpdate(const ClientState& state, const ProblemSpec& spec,
                         const AlgoConfig& cfg, int n);

// l2 sensitivity of the variant's round-n update at this client.
double RoundSensitivity(const ClientState& state, const ProblemSpec& spec,
                        const AlgoConfig& cfg, int n);

// Noise variance the variant injects at round n (0 for noiseless configs).
double RoundNoiseVariance(const ClientState& state, const ProblemSpec& spec,
                          const AlgoConfig& cfg, int n);

// Per-round snapshots; index r holds round r + 1 for every client.
struct Trajectory {
  std::vector<std::vector<Vector>> primal;
  std::vector<std::vector<Vector>> shared;

  int rounds() const { return static_cast<int>(primal.size()); }
};

enum class Execution { kSerial, kParallel };

// Runs cfg.T synchronous rounds: local step, perturbation, exchange, and
// (ADMM variants) dual update. Round 0 exchanges the all-zero initial
// models. Noise at client k, round n comes from stream (seed, k, n), so the
// result is identical for both execution modes.
Trajectory Run(std::vector<ClientState>& clients, const graph::Topology& topology,
               const ProblemSpec& spec, const AlgoConfig& cfg, uint64_t seed,
               Execution execution = Execution::kParallel);

}  // namespace fednet::consensus

#endif  // FEDNET_CONSENSUS_H_
