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
#ifndef FEDNET_HARNESS_H_
#define FEDNET_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fednet/consensus.h"
#include "fednet/graph.h"
#include "fednet/oracle.h"

namespace fednet::harness {

enum class ProblemKind { kElasticNet, kLad, kRidge };

std::string ToString(ProblemKind kind);
ProblemKind ParseProblem(std::string_view name);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kElasticNet;
  int num_clients = 50;         // K
  int samples_per_client = 50;  // M_k
  int num_features = 8;         // P
  double avg_degree = 3.0;
  uint64_t topology_seed = 7;
  double noise_std = 0.1;

  double lambda = 1.0;
  std::optional<double> lambda1;  // unset: 0.001 ||X^T y||_inf per data seed
  double lambda2 = 1.0;
  double c1 = 10.0;
  bool analytic_c1 = true;  // row-norm bound for LAD instead of spec c1

  std::vector<consensus::Variant> algos = {consensus::Variant::kZcdpNfl};
  double rho = 10.0;
  double eta0 = 3.0;
  double eta_exponent = 1.0;
  // Gradient-baseline step scale. Unset: matched to zCDP-NFL's noiseless
  // error at iteration kAlphaMatchIter (see MatchAlpha0).
  std::optional<double> alpha0;
  double tau = 0.99;
  int T = 200;

  std::optional<double> epsilon;  // learning curves; unset: noiseless
  std::vector<double> eps_grid;   // trade-off sweep
  double delta = 1e-4;
  int n_seeds = 10;
  uint64_t seed = 0;
  int trials = 100;  // sensitivity audit

  void Validate() const;
  ProblemSpec MakeProblem(std::span<const Dataset> datasets) const;
  // Noiseless when epsilon is unset, budget-matched otherwise. Requires
  // alpha0 to be set.
  consensus::AlgoConfig MakeAlgo(consensus::Variant variant,
                                 std::optional<double> epsilon) const;
};

// One point on a learning curve. total_epsilon is 0 for noiseless runs.
struct ExperimentRecord {
  std::string algo;
  int seed = 0;
  int iter = 0;
  double normalized_error = 0.0;
  double objective_gap = 0.0;
  double total_epsilon = 0.0;
};

struct TradeoffRow {
  std::string algo;
  double epsilon = 0.0;
  double final_error = 0.0;  // median over seeds after T rounds
};

// Everything a single (seed) replicate shares across algorithms.
struct Replicate {
  SyntheticData data;
  ProblemSpec spec;
  Vector reference;  // centralized solution w_c
};

Replicate MakeReplicate(const ExperimentConfig& cfg, int seed_index);

// Per-round metrics of one run. The gap is measured at the running average
// of the network-average released iterates.
struct CurveMetrics {
  std::vector<double> normalized_error;
  std::vector<double> objective_gap;
  std::vector<double> consensus_residual;
};

CurveMetrics EvaluateTrajectory(const consensus::Trajectory& traj,
                                const graph::Topology& topology, const Replicate& rep);

// Runs one algorithm on one replicate; noise streams depend only on
// (cfg.seed, seed_index) so every algorithm sees the same random numbers.
CurveMetrics RunCell(const ExperimentConfig& cfg, const graph::Topology& topology,
                     const Replicate& rep, const consensus::AlgoConfig& algo,
                     int seed_index,
                     consensus::Execution execution = consensus::Execution::kSerial);

inline constexpr int kAlphaMatchIter = 10;

// Smallest alpha0 at which the noiseless gradient baseline is at least as
// accurate as noiseless zCDP-NFL after kAlphaMatchIter rounds (or T if
// smaller) on `rep`. Falls back to the most accurate scanned value.
double MatchAlpha0(const ExperimentConfig& cfg, const graph::Topology& topology,
                   const Replicate& rep);

// Copy of cfg with alpha0 materialized, matching on replicate 0 if unset.
ExperimentConfig ResolveAlpha0(const ExperimentConfig& cfg, const graph::Topology& topology,
                               const Replicate& rep0);

// |algos| x n_seeds x T records, ordered by (algo, seed, iter).
std::vector<ExperimentRecord> RunLearningCurves(const ExperimentConfig& cfg);

// One row per (algo, epsilon) in eps_grid order.
std::vector<TradeoffRow> RunTradeoffSweep(const ExperimentConfig& cfg);

double Median(std::vector<double> values);

struct AuditOptions {
  int num_clients = 10;
  int samples_per_client = 50;
  int num_features = 8;
  int trials = 100;
  double c1_scale = 1.0;
  // Replace a sample with itself; the measured difference must be 0.
  bool identical_replacement = false;
  uint64_t seed = 0;
};

struct AuditReport {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;
  bool pass() const { return violations == 0 && max_ratio <= 1.0; }
};

// Measures ||w_D - w_D'|| / Delta for the linearized primal update over
// neighboring datasets (one sample replaced) at random client states.
// Requires the absolute loss; c1 is the analytic bound times c1_scale.
AuditReport SensitivityAudit(const ProblemSpec& spec, const consensus::AlgoConfig& cfg,
                             const AuditOptions& options);

}  // namespace fednet::harness

#endif  // FEDNET_HARNESS_H_
