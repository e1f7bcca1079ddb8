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
#include "fednet/consensus.h"

#include <algorithm>
#include <cmath>

#include "fednet/round_kernels.h"

namespace fednet::consensus {
namespace {

void CheckInbox(const ClientState& state) {
  Require(!state.inbox.empty(), "client " + std::to_string(state.index) + " has an empty inbox");
  Require(state.inbox.size() == state.neighbors.size(),
          "client " + std::to_string(state.index) + " inbox does not match its neighbor list");
}

Vector NeighborSum(const ClientState& state) {
  Vector sum = Vector::Zero(state.w_shared.size());
  for (const Vector& msg : state.inbox) sum += msg;
  return sum;
}

}  // namespace

std::string ToString(Variant variant) {
  switch (variant) {
    case Variant::kZcdpNfl: return "zcdp_nfl";
    case Variant::kEpsDeltaNfl: return "epsdelta_nfl";
    case Variant::kZcdpGradNfl: return "zcdp_grad_nfl";
    case Variant::kPAdmm: return "p_admm";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kZcdpNfl, Variant::kEpsDeltaNfl, Variant::kZcdpGradNfl,
                    Variant::kPAdmm}) {
    if (ToString(v) == name) return v;
  }
  throw ParameterError("algo: unknown variant \"" + std::string(name) +
                       "\" (expected zcdp_nfl, epsdelta_nfl, zcdp_grad_nfl or p_admm)");
}

double AlgoConfig::Eta(int n) const {
  Require(n >= 1, "step-size index starts at 1");
  return eta0 / std::pow(static_cast<double>(n), eta_exponent);
}

double AlgoConfig::Alpha(int n) const {
  Require(n >= 1, "step-size index starts at 1");
  return alpha0 / std::sqrt(static_cast<double>(n));
}

void AlgoConfig::Validate(const ProblemSpec& spec) const {
  Require(rho > 0.0, "rho must be positive");
  Require(eta0 > 0.0, "eta0 must be positive");
  Require(eta_exponent > 0.0 && eta_exponent <= 1.0, "eta_exponent must lie in (0, 1]");
  Require(alpha0 > 0.0, "alpha0 must be positive");
  Require(T >= 1, "T must be at least 1");
  Require(variant != Variant::kPAdmm || spec.IsRidge(),
          "algo: p_admm requires the ridge problem (squared loss with l2 regularizer)");
  if (const auto* z = std::get_if<ZcdpPrivacy>(&privacy)) {
    Require(variant != Variant::kEpsDeltaNfl,
            "algo: epsdelta_nfl needs an (epsilon, delta) budget, not a zCDP schedule");
    z->schedule.Validate();
    Require(z->schedule.T == T, "privacy schedule length must equal T");
    Require(z->delta > 0.0 && z->delta < 1.0, "delta must lie in (0, 1)");
  }
  if (const auto* e = std::get_if<EpsDeltaPrivacy>(&privacy)) {
    Require(variant == Variant::kEpsDeltaNfl,
            "algo: only epsdelta_nfl uses a classical (epsilon, delta) budget");
    Require(e->epsilon > 0.0 && e->epsilon / T <= 1.0,
            "epsilon / T must lie in (0, 1] for the classical Gaussian mechanism");
    Require(e->delta > 0.0 && e->delta < 1.0, "delta must lie in (0, 1)");
  }
}

AlgoConfig WithMatchedBudget(AlgoConfig base, double epsilon, double delta, double tau) {
  if (base.variant == Variant::kEpsDeltaNfl) {
    base.privacy = EpsDeltaPrivacy{epsilon, delta};
  } else {
    privacy::PrivacySchedule schedule{privacy::CalibratePhi1(epsilon, delta, tau, base.T),
                                      tau, base.T};
    base.privacy = ZcdpPrivacy{schedule, delta};
  }
  return base;
}

std::optional<ReportedBudget> ReportBudget(const AlgoConfig& cfg) {
  if (const auto* z = std::get_if<ZcdpPrivacy>(&cfg.privacy)) {
    return ReportedBudget{
        privacy::ZcdpToEpsDelta(privacy::TotalZcdp(z->schedule), z->delta), z->delta};
  }
  if (const auto* e = std::get_if<EpsDeltaPrivacy>(&cfg.privacy)) {
    // Basic composition of T releases at (epsilon / T, delta / T).
    const double eps_i = e->epsilon / cfg.T;
    const double delta_i = e->delta / cfg.T;
    return ReportedBudget{eps_i * cfg.T, delta_i * cfg.T};
  }
  return std::nullopt;
}

std::vector<double> MetropolisWeights(const graph::Topology& topology, int k) {
  const auto nbrs = topology.neighbors(k);
  std::vector<double> weights(nbrs.size() + 1, 0.0);
  double total = 0.0;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    weights[i + 1] =
        1.0 / (1.0 + std::max(topology.degree(k), topology.degree(nbrs[i])));
    total += weights[i + 1];
  }
  weights[0] = 1.0 - total;
  return weights;
}

std::vector<ClientState> InitClients(std::span<const Dataset> datasets,
                                     const graph::Topology& topology,
                                     const ProblemSpec& spec, bool analytic_c1) {
  Require(static_cast<int>(datasets.size()) == topology.num_clients(),
          "one dataset per client is required");
  spec.Validate();
  std::vector<ClientState> clients(datasets.size());
  for (int k = 0; k < topology.num_clients(); ++k) {
    ClientState& c = clients[k];
    c.index = k;
    c.data = datasets[k];
    c.data.Validate();
    const int p = c.data.num_features();
    Require(p == datasets[0].num_features(), "all clients must share the feature dimension");
    c.c1 = (analytic_c1 && spec.loss == LossKind::kAbsolute)
               ? objectives::AnalyticC1(c.data, spec.loss)
               : spec.c1;
    c.w = Vector::Zero(p);
    c.w_shared = Vector::Zero(p);
    c.gamma = Vector::Zero(p);
    const auto nbrs = topology.neighbors(k);
    c.neighbors.assign(nbrs.begin(), nbrs.end());
    const auto weights = MetropolisWeights(topology, k);
    c.self_weight = weights[0];
    c.mixing.assign(weights.begin() + 1, weights.end());
  }
  return clients;
}

Vector ClientSubgrad(const ClientState& state, const ProblemSpec& spec,
                     const AlgoConfig& cfg) {
  const double clip = cfg.IsPrivate() ? state.c1 : objectives::kNoClip;
  return objectives::LocalSubgrad(spec, state.data, state.w_shared, clip);
}

Vector PrimalUpdate(const ClientState& state, const ProblemSpec& spec,
                    const AlgoConfig& cfg, int n) {
  Require(n >= 1, "primal update requires n >= 1");
  CheckInbox(state);
  const double eta = cfg.Eta(n);
  const double degree = static_cast<double>(state.inbox.size());
  const Vector& own = state.w_shared;
  Vector numerator = own / eta + cfg.rho * (degree * own + NeighborSum(state)) -
                     state.gamma - ClientSubgrad(state, spec, cfg);
  return numerator / (2.0 * cfg.rho * degree + 1.0 / eta);
}

Vector DualUpdate(const ClientState& state, const AlgoConfig& cfg) {
  CheckInbox(state);
  Require(state.inbox_round == state.round,
          "dual update on client " + std::to_string(state.index) +
              " needs messages from round " + std::to_string(state.round));
  const double degree = static_cast<double>(state.inbox.size());
  return state.gamma + cfg.rho * (degree * state.w_shared - NeighborSum(state));
}

Vector GradUpdate(const ClientState& state, const ProblemSpec& spec,
                  const AlgoConfig& cfg, int n) {
  Require(n >= 1, "subgradient update requires n >= 1");
  Require(state.inbox.size() == state.mixing.size(),
          "client " + std::to_string(state.index) + " inbox does not match its mixing weights");
  Vector mixed = state.self_weight * state.w_shared;
  for (size_t i = 0; i < state.inbox.size(); ++i) mixed += state.mixing[i] * state.inbox[i];
  return mixed - cfg.Alpha(n) * ClientSubgrad(state, spec, cfg);
}

Vector ExactPrimalUpdate(const ClientState& state, const ProblemSpec& spec,
                         const AlgoConfig& cfg, int n) {
  Require(n >= 1, "primal update requires n >= 1");
  Require(spec.IsRidge(), "exact primal update requires the ridge problem");
  CheckInbox(state);
  const Dataset& d = state.data;
  const double m = d.num_samples();
  const double degree = static_cast<double>(state.inbox.size());
  const double diag = 2.0 * spec.lambda * spec.QuadraticRegCoefficient() / spec.num_clients +
                      2.0 * cfg.rho * degree;
  Matrix lhs = (2.0 / m) * d.x.transpose() * d.x;
  lhs.diagonal().array() += diag;
  const Vector rhs = (2.0 / m) * d.x.transpose() * d.y - state.gamma +
                     cfg.rho * (degree * state.w_shared + NeighborSum(state));
  return lhs.ldlt().solve(rhs);
}

double RoundSensitivity(const ClientState& state, const ProblemSpec& spec,
                        const AlgoConfig& cfg, int n) {
  const int m = state.data.num_samples();
  const int degree = static_cast<int>(state.neighbors.size());
  switch (cfg.variant) {
    case Variant::kZcdpNfl:
    case Variant::kEpsDeltaNfl:
      return privacy::L2Sensitivity({state.c1, m, cfg.rho, degree, cfg.Eta(n)});
    case Variant::kZcdpGradNfl:
      return cfg.Alpha(n) * 2.0 * state.c1 / m;
    case Variant::kPAdmm: {
      // The exact subproblem is strongly convex with modulus at least
      // 2 rho |N| + 2 lambda / K; a gradient shift of 2 c1 / M moves the
      // minimizer by at most the ratio.
      const double modulus = 2.0 * cfg.rho * degree +
                             2.0 * spec.lambda * spec.QuadraticRegCoefficient() /
                                 spec.num_clients;
      return 2.0 * state.c1 / (m * modulus);
    }
  }
  return 0.0;
}

double RoundNoiseVariance(const ClientState& state, const ProblemSpec& spec,
                          const AlgoConfig& cfg, int n) {
  if (const auto* z = std::get_if<ZcdpPrivacy>(&cfg.privacy)) {
    return privacy::NoiseVariance(RoundSensitivity(state, spec, cfg, n),
                                  z->schedule.Budget(n));
  }
  if (const auto* e = std::get_if<EpsDeltaPrivacy>(&cfg.privacy)) {
    const double sigma = privacy::ClassicalGaussianSigma(
        RoundSensitivity(state, spec, cfg, n), e->epsilon / cfg.T, e->delta / cfg.T);
    return sigma * sigma;
  }
  return 0.0;
}

Trajectory Run(std::vector<ClientState>& clients, const graph::Topology& topology,
               const ProblemSpec& spec, const AlgoConfig& cfg, uint64_t seed,
               Execution execution) {
  cfg.Validate(spec);
  Require(static_cast<int>(clients.size()) == topology.num_clients(),
          "one client state per topology node is required");
  for (const ClientState& c : clients) {
    Require(c.round == 0 && c.w.isZero() && c.gamma.isZero() && c.w_shared.isZero(),
            "clients must start from w = 0, gamma = 0");
    if (cfg.IsAdmm()) {
      Require(!c.neighbors.empty(),
              "client " + std::to_string(c.index) + " has no neighbors");
    }
  }
  const std::span<ClientState> span(clients);
  const bool parallel = execution == Execution::kParallel;

  // The initial models carry no data, so they are released without noise.
  parallel ? kernels::ExchangeParallel(span, 0) : kernels::ExchangeSerial(span, 0);

  Trajectory traj;
  traj.primal.reserve(cfg.T);
  traj.shared.reserve(cfg.T);
  for (int n = 1; n <= cfg.T; ++n) {
    if (parallel) {
      kernels::LocalStepParallel(span, spec, cfg, seed, n);
      kernels::ExchangeParallel(span, n);
      if (cfg.IsAdmm()) kernels::DualStepParallel(span, cfg);
    } else {
      kernels::LocalStepSerial(span, spec, cfg, seed, n);
      kernels::ExchangeSerial(span, n);
      if (cfg.IsAdmm()) kernels::DualStepSerial(span, cfg);
    }
    auto& primal = traj.primal.emplace_back();
    auto& shared = traj.shared.emplace_back();
    primal.reserve(clients.size());
    shared.reserve(clients.size());
    for (const ClientState& c : clients) {
      primal.push_back(c.w);
      shared.push_back(c.w_shared);
    }
  }
  return traj;
}

}  // namespace fednet::consensus
