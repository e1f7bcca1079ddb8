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
#include "fednet/harness.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace fednet::harness {
namespace {

// Stream tags for DeriveSeed so data, noise and audit draws never collide.
constexpr uint64_t kDataStream = 1;
constexpr uint64_t kNoiseStream = 2;
constexpr uint64_t kAuditStream = 3;

template <typename Fn>
void ParallelFor(std::ptrdiff_t count, Fn&& fn) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(fednet_harness_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string ToString(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kElasticNet: return "elastic_net";
    case ProblemKind::kLad: return "lad";
    case ProblemKind::kRidge: return "ridge";
  }
  return "unknown";
}

ProblemKind ParseProblem(std::string_view name) {
  for (ProblemKind k : {ProblemKind::kElasticNet, ProblemKind::kLad, ProblemKind::kRidge}) {
    if (ToString(k) == name) return k;
  }
  throw ParameterError("problem: unknown problem \"" + std::string(name) +
                       "\" (expected elastic_net, lad or ridge)");
}

void ExperimentConfig::Validate() const {
  Require(num_clients >= 2, "K must be at least 2");
  Require(samples_per_client >= 1, "M_k must be positive");
  Require(num_features >= 1, "P must be positive");
  Require(avg_degree >= 2.0 && avg_degree <= num_clients, "avg_degree must lie in [2, K]");
  Require(noise_std >= 0.0, "noise_std must be nonnegative");
  Require(lambda > 0.0, "lambda must be positive");
  Require(!lambda1 || *lambda1 >= 0.0, "lambda1 must be nonnegative");
  Require(lambda2 >= 0.0, "lambda2 must be nonnegative");
  Require(c1 > 0.0, "c1 must be positive");
  Require(!algos.empty(), "algos must name at least one algorithm");
  Require(tau > 0.0 && tau < 1.0, "tau must lie in (0, 1)");
  Require(T >= 1, "T must be at least 1");
  Require(!epsilon || *epsilon > 0.0, "epsilon must be positive");
  for (double e : eps_grid) Require(e > 0.0, "eps_grid entries must be positive");
  Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  Require(n_seeds >= 1, "n_seeds must be at least 1");
  Require(trials >= 1, "trials must be at least 1");
  ProblemSpec probe;
  probe.loss = problem == ProblemKind::kLad ? LossKind::kAbsolute : LossKind::kSquared;
  probe.reg = problem == ProblemKind::kRidge ? RegKind::kL2
              : problem == ProblemKind::kLad ? RegKind::kNone
                                             : RegKind::kElasticNet;
  probe.num_clients = num_clients;
  Require(!alpha0 || *alpha0 > 0.0, "alpha0 must be positive");
  for (consensus::Variant v : algos) {
    ExperimentConfig probe_cfg = *this;
    probe_cfg.alpha0 = alpha0.value_or(1.0);
    consensus::AlgoConfig algo = probe_cfg.MakeAlgo(v, std::nullopt);
    Require(v != consensus::Variant::kPAdmm || probe.IsRidge(),
            "algos: p_admm requires problem = ridge");
    algo.Validate(probe);
  }
}

ProblemSpec ExperimentConfig::MakeProblem(std::span<const Dataset> datasets) const {
  ProblemSpec spec;
  spec.lambda = lambda;
  spec.c1 = c1;
  spec.num_clients = num_clients;
  switch (problem) {
    case ProblemKind::kElasticNet:
      spec.loss = LossKind::kSquared;
      spec.reg = RegKind::kElasticNet;
      spec.lambda1 = lambda1 ? *lambda1 : DefaultLambda1(datasets);
      spec.lambda2 = lambda2;
      break;
    case ProblemKind::kLad:
      spec.loss = LossKind::kAbsolute;
      spec.reg = RegKind::kNone;
      break;
    case ProblemKind::kRidge:
      spec.loss = LossKind::kSquared;
      spec.reg = RegKind::kL2;
      break;
  }
  spec.Validate();
  return spec;
}

consensus::AlgoConfig ExperimentConfig::MakeAlgo(consensus::Variant variant,
                                                 std::optional<double> eps) const {
  consensus::AlgoConfig algo;
  algo.variant = variant;
  algo.rho = rho;
  algo.eta0 = eta0;
  algo.eta_exponent = eta_exponent;
  Require(alpha0.has_value() || variant != consensus::Variant::kZcdpGradNfl,
          "alpha0 must be resolved before building zcdp_grad_nfl");
  algo.alpha0 = alpha0.value_or(1.0);
  algo.T = T;
  if (eps) algo = consensus::WithMatchedBudget(algo, *eps, delta, tau);
  return algo;
}

Replicate MakeReplicate(const ExperimentConfig& cfg, int seed_index) {
  Replicate rep;
  rep.data = GenerateSynthetic(cfg.num_clients, cfg.samples_per_client, cfg.num_features,
                               cfg.noise_std,
                               DeriveSeed(cfg.seed, kDataStream, seed_index));
  rep.spec = cfg.MakeProblem(rep.data.datasets);
  rep.reference = CentralizedOracle(rep.data.datasets, rep.spec, 1e-12);
  return rep;
}

CurveMetrics EvaluateTrajectory(const consensus::Trajectory& traj,
                                const graph::Topology& topology, const Replicate& rep) {
  CurveMetrics m;
  const int rounds = traj.rounds();
  m.normalized_error.reserve(rounds);
  m.objective_gap.reserve(rounds);
  m.consensus_residual.reserve(rounds);
  const double optimum = GlobalObjective(rep.data.datasets, rep.spec, rep.reference);
  Vector running_sum = Vector::Zero(rep.reference.size());
  for (int r = 0; r < rounds; ++r) {
    const auto& shared = traj.shared[r];
    m.normalized_error.push_back(NormalizedError(traj.primal[r], rep.reference));
    Vector average = Vector::Zero(rep.reference.size());
    for (const Vector& w : shared) average += w;
    running_sum += average / static_cast<double>(shared.size());
    const Vector running_average = running_sum / static_cast<double>(r + 1);
    m.objective_gap.push_back(GlobalObjective(rep.data.datasets, rep.spec, running_average) -
                              optimum);
    double residual = 0.0;
    for (const auto& [k, l] : topology.edges()) residual += (shared[k] - shared[l]).squaredNorm();
    m.consensus_residual.push_back(residual);
  }
  return m;
}

CurveMetrics RunCell(const ExperimentConfig& cfg, const graph::Topology& topology,
                     const Replicate& rep, const consensus::AlgoConfig& algo,
                     int seed_index, consensus::Execution execution) {
  auto clients = consensus::InitClients(rep.data.datasets, topology, rep.spec, cfg.analytic_c1);
  const auto traj = consensus::Run(clients, topology, rep.spec, algo,
                                   DeriveSeed(cfg.seed, kNoiseStream, seed_index), execution);
  return EvaluateTrajectory(traj, topology, rep);
}

double MatchAlpha0(const ExperimentConfig& cfg, const graph::Topology& topology,
                   const Replicate& rep) {
  ExperimentConfig probe = cfg;
  probe.T = std::min(cfg.T, kAlphaMatchIter);
  probe.alpha0 = 1.0;
  auto final_error = [&](consensus::Variant variant, double alpha0) {
    probe.alpha0 = alpha0;
    return RunCell(probe, topology, rep, probe.MakeAlgo(variant, std::nullopt), 0)
        .normalized_error.back();
  };
  const double target = final_error(consensus::Variant::kZcdpNfl, 1.0);
  auto gap = [&](double log_alpha) {
    const double err = final_error(consensus::Variant::kZcdpGradNfl, std::exp(log_alpha));
    return std::isfinite(err) ? err - target : std::numeric_limits<double>::infinity();
  };

  // Log-spaced scan over [1e-4, 10], then bisection on the first crossing.
  constexpr int kPerDecade = 6;
  const double lo_log = std::log(1e-4);
  const double step = std::log(10.0) / kPerDecade;
  double best_log = lo_log;
  double best_gap = gap(lo_log);
  if (best_gap <= 0.0) return std::exp(lo_log);
  for (int i = 1; i <= 5 * kPerDecade; ++i) {
    const double hi = lo_log + i * step;
    const double g = gap(hi);
    if (g <= 0.0) {
      double a = hi - step;
      double b = hi;
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (a + b);
        (gap(mid) <= 0.0 ? b : a) = mid;
      }
      return std::exp(b);
    }
    if (g < best_gap) {
      best_gap = g;
      best_log = hi;
    }
  }
  return std::exp(best_log);
}

ExperimentConfig ResolveAlpha0(const ExperimentConfig& cfg, const graph::Topology& topology,
                               const Replicate& rep0) {
  ExperimentConfig out = cfg;
  const bool needs_alpha =
      std::find(cfg.algos.begin(), cfg.algos.end(), consensus::Variant::kZcdpGradNfl) !=
      cfg.algos.end();
  if (!out.alpha0 && needs_alpha) out.alpha0 = MatchAlpha0(cfg, topology, rep0);
  return out;
}

std::vector<ExperimentRecord> RunLearningCurves(const ExperimentConfig& cfg_in) {
  cfg_in.Validate();
  const auto topology =
      graph::RandomConnectedGraph(cfg_in.num_clients, cfg_in.avg_degree, cfg_in.topology_seed);
  std::vector<Replicate> reps(cfg_in.n_seeds);
  ParallelFor(cfg_in.n_seeds, [&](std::ptrdiff_t s) { reps[s] = MakeReplicate(cfg_in, s); });
  const ExperimentConfig cfg = ResolveAlpha0(cfg_in, topology, reps[0]);

  const auto num_algos = static_cast<std::ptrdiff_t>(cfg.algos.size());
  std::vector<CurveMetrics> cells(num_algos * cfg.n_seeds);
  ParallelFor(num_algos * cfg.n_seeds, [&](std::ptrdiff_t i) {
    const auto a = i / cfg.n_seeds;
    const auto s = static_cast<int>(i % cfg.n_seeds);
    cells[i] = RunCell(cfg, topology, reps[s], cfg.MakeAlgo(cfg.algos[a], cfg.epsilon), s);
  });

  std::vector<ExperimentRecord> records;
  records.reserve(cells.size() * cfg.T);
  for (std::ptrdiff_t a = 0; a < num_algos; ++a) {
    const std::string name = consensus::ToString(cfg.algos[a]);
    const auto budget = consensus::ReportBudget(cfg.MakeAlgo(cfg.algos[a], cfg.epsilon));
    for (int s = 0; s < cfg.n_seeds; ++s) {
      const CurveMetrics& m = cells[a * cfg.n_seeds + s];
      for (int n = 1; n <= cfg.T; ++n) {
        records.push_back({name, s, n, m.normalized_error[n - 1], m.objective_gap[n - 1],
                           budget ? budget->epsilon : 0.0});
      }
    }
  }
  return records;
}

std::vector<TradeoffRow> RunTradeoffSweep(const ExperimentConfig& cfg_in) {
  cfg_in.Validate();
  Require(!cfg_in.eps_grid.empty(), "eps_grid must be nonempty for a sweep");
  const auto topology =
      graph::RandomConnectedGraph(cfg_in.num_clients, cfg_in.avg_degree, cfg_in.topology_seed);
  std::vector<Replicate> reps(cfg_in.n_seeds);
  ParallelFor(cfg_in.n_seeds, [&](std::ptrdiff_t s) { reps[s] = MakeReplicate(cfg_in, s); });
  const ExperimentConfig cfg = ResolveAlpha0(cfg_in, topology, reps[0]);

  const auto num_algos = static_cast<std::ptrdiff_t>(cfg.algos.size());
  const auto num_eps = static_cast<std::ptrdiff_t>(cfg.eps_grid.size());
  std::vector<double> finals(num_algos * num_eps * cfg.n_seeds);
  ParallelFor(static_cast<std::ptrdiff_t>(finals.size()), [&](std::ptrdiff_t i) {
    const auto s = static_cast<int>(i % cfg.n_seeds);
    const auto e = (i / cfg.n_seeds) % num_eps;
    const auto a = i / (cfg.n_seeds * num_eps);
    const auto m = RunCell(cfg, topology, reps[s], cfg.MakeAlgo(cfg.algos[a], cfg.eps_grid[e]), s);
    finals[i] = m.normalized_error.back();
  });

  std::vector<TradeoffRow> rows;
  rows.reserve(num_algos * num_eps);
  for (std::ptrdiff_t a = 0; a < num_algos; ++a) {
    for (std::ptrdiff_t e = 0; e < num_eps; ++e) {
      const auto begin = finals.begin() + (a * num_eps + e) * cfg.n_seeds;
      rows.push_back({consensus::ToString(cfg.algos[a]), cfg.eps_grid[e],
                      Median(std::vector<double>(begin, begin + cfg.n_seeds))});
    }
  }
  return rows;
}

double Median(std::vector<double> values) {
  Require(!values.empty(), "median of an empty set");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

AuditReport SensitivityAudit(const ProblemSpec& spec_in, const consensus::AlgoConfig& cfg_in,
                             const AuditOptions& options) {
  Require(spec_in.loss == LossKind::kAbsolute,
          "sensitivity audit requires the absolute loss (analytic c1)");
  Require(options.trials >= 1, "trials must be at least 1");
  Require(options.c1_scale > 0.0, "c1_scale must be positive");
  Require(cfg_in.IsAdmm() && cfg_in.variant != consensus::Variant::kPAdmm,
          "sensitivity audit covers the linearized primal update");
  ProblemSpec spec = spec_in;
  spec.num_clients = options.num_clients;
  spec.Validate();
  // Clipping belongs to the private mechanism; the audit always runs it.
  consensus::AlgoConfig cfg = cfg_in;
  if (!cfg.IsPrivate()) cfg = consensus::WithMatchedBudget(cfg, 1.0, 1e-4, 0.98);

  const auto data = GenerateSynthetic(options.num_clients, options.samples_per_client,
                                      options.num_features, 0.1,
                                      DeriveSeed(options.seed, kAuditStream, 0));
  const auto topology =
      options.num_clients >= 4
          ? graph::RandomConnectedGraph(options.num_clients, 3.0,
                                        DeriveSeed(options.seed, kAuditStream, 1))
          : graph::PathGraph(options.num_clients);
  auto clients = consensus::InitClients(data.datasets, topology, spec, true);

  Rng rng(DeriveSeed(options.seed, kAuditStream, 2));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&] { return normal(rng); };
  const auto p = options.num_features;

  AuditReport report;
  report.trials = options.trials;
  for (int t = 0; t < options.trials; ++t) {
    consensus::ClientState state = clients[t % options.num_clients];
    state.c1 *= options.c1_scale;
    const int n = std::uniform_int_distribution<int>(1, cfg.T)(rng);
    state.w_shared = Vector::NullaryExpr(p, draw);
    state.gamma = Vector::NullaryExpr(p, draw);
    state.inbox.assign(state.neighbors.size(), Vector());
    for (Vector& msg : state.inbox) msg = Vector::NullaryExpr(p, draw);
    state.round = state.inbox_round = n - 1;

    consensus::ClientState neighbor = state;
    const int j = std::uniform_int_distribution<int>(0, state.data.num_samples() - 1)(rng);
    if (!options.identical_replacement) {
      const Vector x = Vector::NullaryExpr(p, draw);
      neighbor.data.x.row(j) = x.transpose();
      neighbor.data.y(j) = x.dot(data.true_w) + 0.1 * draw();
    }

    const Vector w_a = consensus::PrimalUpdate(state, spec, cfg, n);
    const Vector w_b = consensus::PrimalUpdate(neighbor, spec, cfg, n);
    const double bound = consensus::RoundSensitivity(state, spec, cfg, n);
    const double ratio = (w_a - w_b).norm() / bound;
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > 1.0) ++report.violations;
  }
  return report;
}

}  // namespace fednet::harness
