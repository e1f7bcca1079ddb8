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

#include <cmath>

#include "fednet/harness.h"
#include "fednet/oracle.h"
#include "fednet/round_kernels.h"
#include "gtest/gtest.h"

namespace fednet::consensus {
namespace {

Vector Vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Squared loss with no regularizer; data chosen so the loss subgradient at
// w_shared is whatever the test needs.
ProblemSpec PlainSpec() {
  ProblemSpec spec;
  spec.loss = LossKind::kSquared;
  spec.reg = RegKind::kNone;
  spec.num_clients = 1;
  return spec;
}

Dataset ZeroData(int p) {
  Dataset d;
  d.x = Matrix::Zero(1, p);
  d.y = Vector::Zero(1);
  return d;
}

ClientState MakeState(const Vector& own, std::vector<Vector> inbox, const Vector& gamma,
                      Dataset data) {
  ClientState s;
  s.data = std::move(data);
  s.w = own;
  s.w_shared = own;
  s.gamma = gamma;
  for (std::size_t i = 0; i < inbox.size(); ++i) s.neighbors.push_back(static_cast<int>(i) + 1);
  s.inbox = std::move(inbox);
  s.mixing.assign(s.inbox.size(), 1.0 / (1.0 + static_cast<double>(s.inbox.size())));
  s.self_weight = 1.0 / (1.0 + static_cast<double>(s.inbox.size()));
  s.round = 0;
  s.inbox_round = 0;
  return s;
}

AlgoConfig Noiseless(Variant v, double rho, double eta0) {
  AlgoConfig cfg;
  cfg.variant = v;
  cfg.rho = rho;
  cfg.eta0 = eta0;
  cfg.T = 10;
  return cfg;
}

TEST(PrimalUpdateTest, ConsensusFixedPoint) {
  const Vector v = Vec({0.3, -1.2, 2.0});
  const auto s = MakeState(v, {v, v}, Vector::Zero(3), ZeroData(3));
  const Vector w = PrimalUpdate(s, PlainSpec(), Noiseless(Variant::kZcdpNfl, 0.7, 0.4), 3);
  EXPECT_TRUE(w.isApprox(v, 1e-14));
}

TEST(PrimalUpdateTest, HandEvaluatedScalar) {
  const auto s = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), ZeroData(1));
  const Vector w = PrimalUpdate(s, PlainSpec(), Noiseless(Variant::kZcdpNfl, 0.5, 1.0), 1);
  EXPECT_NEAR(w(0), 0.75, 1e-15);
}

TEST(PrimalUpdateTest, HandEvaluatedScalarWithSubgradient) {
  // 2 x (x w - y) at x = 1, w = 1, y = 0.75 gives g = 0.5.
  Dataset d;
  d.x = Matrix::Ones(1, 1);
  d.y = Vec({0.75});
  const auto s = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), d);
  const Vector w = PrimalUpdate(s, PlainSpec(), Noiseless(Variant::kZcdpNfl, 0.5, 1.0), 1);
  EXPECT_NEAR(w(0), 0.5, 1e-15);
}

TEST(PrimalUpdateTest, RejectsEmptyInboxAndRoundZero) {
  auto s = MakeState(Vec({1.0}), {}, Vec({0.0}), ZeroData(1));
  const auto cfg = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  EXPECT_THROW(PrimalUpdate(s, PlainSpec(), cfg, 1), ParameterError);
  s = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), ZeroData(1));
  EXPECT_THROW(PrimalUpdate(s, PlainSpec(), cfg, 0), ParameterError);
}

TEST(DualUpdateTest, Examples) {
  const auto cfg = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  const Vector g0 = Vec({0.5, -0.5});
  auto equal = MakeState(Vec({2.0, 1.0}), {Vec({2.0, 1.0}), Vec({2.0, 1.0})}, g0, ZeroData(2));
  EXPECT_TRUE(DualUpdate(equal, cfg).isApprox(g0, 1e-15));

  auto one = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), ZeroData(1));
  EXPECT_NEAR(DualUpdate(one, cfg)(0), 1.0, 1e-15);

  auto sym = MakeState(Vec({1.0}), {Vec({0.0}), Vec({2.0})}, Vec({0.25}), ZeroData(1));
  EXPECT_NEAR(DualUpdate(sym, cfg)(0), 0.25, 1e-15);
}

TEST(DualUpdateTest, RejectsStaleInbox) {
  auto s = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), ZeroData(1));
  s.round = 2;
  s.inbox_round = 1;
  EXPECT_THROW(DualUpdate(s, Noiseless(Variant::kZcdpNfl, 1.0, 1.0)), ParameterError);
}

TEST(GradUpdateTest, ConsensusIsFixedWithZeroSubgradient) {
  const Vector v = Vec({1.5, -0.5});
  const auto s = MakeState(v, {v, v, v}, Vector::Zero(2), ZeroData(2));
  const Vector w = GradUpdate(s, PlainSpec(), Noiseless(Variant::kZcdpGradNfl, 1.0, 1.0), 5);
  EXPECT_TRUE(w.isApprox(v, 1e-15));
}

TEST(GradUpdateTest, MetropolisWeightsOnPath) {
  const auto top = graph::PathGraph(3);
  const auto a0 = MetropolisWeights(top, 0);
  const auto a1 = MetropolisWeights(top, 1);
  ASSERT_EQ(a0.size(), 2u);
  ASSERT_EQ(a1.size(), 3u);
  EXPECT_NEAR(a0[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(a0[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(a1[0], 1.0 / 3.0, 1e-15);
}

TEST(GradUpdateTest, MetropolisRowsSumToOneAndAreSymmetric) {
  const auto top = graph::RandomConnectedGraph(25, 4.0, 3);
  Matrix a = Matrix::Zero(25, 25);
  for (int k = 0; k < 25; ++k) {
    const auto w = MetropolisWeights(top, k);
    a(k, k) = w[0];
    const auto nb = top.neighbors(k);
    for (std::size_t i = 0; i < nb.size(); ++i) a(k, nb[i]) = w[i + 1];
  }
  EXPECT_TRUE((a - a.transpose()).isZero(1e-15));
  EXPECT_TRUE((a.rowwise().sum() - Vector::Ones(25)).isZero(1e-14));
  EXPECT_GE(a.minCoeff(), 0.0);
}

TEST(GradUpdateTest, IsolatedWeightStep) {
  // g = 2 x (x w - y) with x = 1, w = 3, y = 2 gives g = 2; step 1/sqrt(4).
  Dataset d;
  d.x = Matrix::Ones(1, 1);
  d.y = Vec({2.0});
  auto s = MakeState(Vec({3.0}), {Vec({-7.0})}, Vec({0.0}), d);
  s.self_weight = 1.0;
  s.mixing = {0.0};
  const Vector w = GradUpdate(s, PlainSpec(), Noiseless(Variant::kZcdpGradNfl, 1.0, 1.0), 4);
  EXPECT_NEAR(w(0), 2.0, 1e-15);
}

ProblemSpec RidgeSpec(double lambda, int k) {
  ProblemSpec spec;
  spec.loss = LossKind::kSquared;
  spec.reg = RegKind::kL2;
  spec.lambda = lambda;
  spec.num_clients = k;
  return spec;
}

TEST(ExactPrimalUpdateTest, ZeroDataScalarSolve) {
  const Vector v = Vec({1.0, -2.0});
  const auto s = MakeState(v, {v, v}, Vector::Zero(2), ZeroData(2));
  const auto spec = RidgeSpec(1.0, 2);
  const double rho = 0.5;
  const Vector w = ExactPrimalUpdate(s, spec, Noiseless(Variant::kPAdmm, rho, 1.0), 1);
  const double expected = (2.0 * rho * 2) / (2.0 * 1.0 / 2 + 2.0 * rho * 2);
  EXPECT_TRUE(w.isApprox(v * expected, 1e-14));
}

TEST(ExactPrimalUpdateTest, VanishingRegularizerGivesConsensusPull) {
  const auto s = MakeState(Vec({1.0}), {Vec({3.0}), Vec({-1.0})}, Vec({0.0}), ZeroData(1));
  const Vector w =
      ExactPrimalUpdate(s, RidgeSpec(1e-12, 1), Noiseless(Variant::kPAdmm, 1.0, 1.0), 1);
  EXPECT_NEAR(w(0), ((1.0 + 3.0) + (1.0 - 1.0)) / 4.0, 1e-10);
}

TEST(ExactPrimalUpdateTest, SatisfiesLinearSystem) {
  const auto data = harness::GenerateSynthetic(1, 20, 4, 0.1, 5).datasets[0];
  const auto s = MakeState(Vec({0.1, 0.2, 0.3, 0.4}), {Vec({1, 0, 0, 0}), Vec({0, 1, 1, 0})},
                           Vec({0.5, -0.5, 0.25, 0.0}), data);
  const auto spec = RidgeSpec(2.0, 5);
  const double rho = 1.3;
  const Vector w = ExactPrimalUpdate(s, spec, Noiseless(Variant::kPAdmm, rho, 1.0), 1);
  const double m = data.num_samples();
  const Matrix lhs = 2.0 * data.x.transpose() * data.x / m +
                     (2.0 * spec.lambda / spec.num_clients + 2.0 * rho * 2) *
                         Matrix::Identity(4, 4);
  const Vector rhs = 2.0 * data.x.transpose() * data.y / m - s.gamma +
                     rho * (2.0 * s.w_shared + s.inbox[0] + s.inbox[1]);
  EXPECT_LE((lhs * w - rhs).norm(), 1e-10);
}

TEST(ExactPrimalUpdateTest, RejectsNonRidge) {
  ProblemSpec lad;
  lad.loss = LossKind::kAbsolute;
  lad.reg = RegKind::kNone;
  const auto s = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), ZeroData(1));
  EXPECT_THROW(ExactPrimalUpdate(s, lad, Noiseless(Variant::kPAdmm, 1.0, 1.0), 1),
               ParameterError);
}

TEST(AlgoConfigTest, ValidationErrors) {
  ProblemSpec lad;
  lad.loss = LossKind::kAbsolute;
  lad.reg = RegKind::kNone;
  EXPECT_THROW(Noiseless(Variant::kPAdmm, 1.0, 1.0).Validate(lad), ParameterError);

  auto bad_privacy = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  bad_privacy.privacy = EpsDeltaPrivacy{1.0, 1e-4};
  EXPECT_THROW(bad_privacy.Validate(RidgeSpec(1.0, 2)), ParameterError);

  auto too_much = Noiseless(Variant::kEpsDeltaNfl, 1.0, 1.0);
  too_much.T = 2;
  too_much.privacy = EpsDeltaPrivacy{5.0, 1e-4};
  EXPECT_THROW(too_much.Validate(RidgeSpec(1.0, 2)), ParameterError);

  auto q = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  q.eta_exponent = 1.5;
  EXPECT_THROW(q.Validate(RidgeSpec(1.0, 2)), ParameterError);
}

TEST(BudgetMatchingTest, AllVariantsReportTheSameTotal) {
  for (double eps : {0.5, 1.0, 4.0}) {
    for (Variant v : {Variant::kZcdpNfl, Variant::kEpsDeltaNfl, Variant::kZcdpGradNfl,
                      Variant::kPAdmm}) {
      AlgoConfig base = Noiseless(v, 1.0, 1.0);
      base.T = 200;
      const auto budget = ReportBudget(WithMatchedBudget(base, eps, 1e-4, 0.98));
      ASSERT_TRUE(budget.has_value());
      EXPECT_NEAR(budget->epsilon, eps, 1e-9) << ToString(v);
      EXPECT_NEAR(budget->delta, 1e-4, 1e-15) << ToString(v);
    }
  }
  EXPECT_FALSE(ReportBudget(Noiseless(Variant::kZcdpNfl, 1.0, 1.0)).has_value());
}

TEST(SensitivityTest, GradientBaselineScalesWithStep) {
  auto s = MakeState(Vec({1.0}), {Vec({0.0})}, Vec({0.0}), ZeroData(1));
  s.c1 = 1.5;
  AlgoConfig cfg = Noiseless(Variant::kZcdpGradNfl, 1.0, 1.0);
  cfg.alpha0 = 0.2;
  EXPECT_NEAR(RoundSensitivity(s, PlainSpec(), cfg, 9), 0.2 / 3.0 * 2.0 * 1.5 / 1.0, 1e-15);
}

TEST(SensitivityTest, ZcdpNoiseVarianceDecreases) {
  auto s = MakeState(Vec({1.0}), {Vec({0.0}), Vec({0.0})}, Vec({0.0}), ZeroData(1));
  AlgoConfig cfg = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  cfg.T = 50;
  cfg = WithMatchedBudget(cfg, 1.0, 1e-4, 0.95);
  double prev = RoundNoiseVariance(s, PlainSpec(), cfg, 1);
  EXPECT_GT(prev, 0.0);
  for (int n = 2; n <= cfg.T; ++n) {
    const double cur = RoundNoiseVariance(s, PlainSpec(), cfg, n);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_EQ(RoundNoiseVariance(s, PlainSpec(), Noiseless(Variant::kZcdpNfl, 1.0, 1.0), 1), 0.0);
}

struct Fixture {
  harness::SyntheticData data;
  graph::Topology topology;
  ProblemSpec spec;
};

Fixture RidgeOnPath(int k) {
  Fixture f{harness::GenerateSynthetic(k, 20, 4, 0.1, 17), graph::PathGraph(k), RidgeSpec(1.0, k)};
  return f;
}

TEST(RunTest, SingleRoundShape) {
  auto f = RidgeOnPath(5);
  auto clients = InitClients(f.data.datasets, f.topology, f.spec);
  auto cfg = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  cfg.T = 1;
  const auto traj = consensus::Run(clients, f.topology, f.spec, cfg, 0);
  ASSERT_EQ(traj.rounds(), 1);
  EXPECT_EQ(traj.primal[0].size(), 5u);
  EXPECT_EQ(traj.shared[0].size(), 5u);
}

TEST(RunTest, RejectsNonZeroStartAndMismatch) {
  auto f = RidgeOnPath(5);
  auto clients = InitClients(f.data.datasets, f.topology, f.spec);
  clients[2].w(0) = 1.0;
  EXPECT_THROW(consensus::Run(clients, f.topology, f.spec, Noiseless(Variant::kZcdpNfl, 1.0, 1.0), 0),
               ParameterError);

  ProblemSpec lad;
  lad.loss = LossKind::kAbsolute;
  lad.reg = RegKind::kNone;
  lad.num_clients = 5;
  auto lad_clients = InitClients(f.data.datasets, f.topology, lad);
  EXPECT_THROW(consensus::Run(lad_clients, f.topology, lad, Noiseless(Variant::kPAdmm, 1.0, 1.0), 0),
               ParameterError);
}

TEST(RunTest, IdenticalSeedsGiveIdenticalTrajectories) {
  auto f = RidgeOnPath(6);
  AlgoConfig cfg = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  cfg.T = 30;
  cfg = WithMatchedBudget(cfg, 1.0, 1e-4, 0.98);
  auto a = InitClients(f.data.datasets, f.topology, f.spec);
  auto b = InitClients(f.data.datasets, f.topology, f.spec);
  auto c = InitClients(f.data.datasets, f.topology, f.spec);
  const auto ta = consensus::Run(a, f.topology, f.spec, cfg, 42);
  const auto tb = consensus::Run(b, f.topology, f.spec, cfg, 42);
  const auto tc = consensus::Run(c, f.topology, f.spec, cfg, 43);
  bool differs = false;
  for (int r = 0; r < cfg.T; ++r) {
    for (int k = 0; k < 6; ++k) {
      EXPECT_EQ(ta.shared[r][k], tb.shared[r][k]);
      EXPECT_EQ(ta.primal[r][k], tb.primal[r][k]);
      differs |= ta.shared[r][k] != tc.shared[r][k];
    }
  }
  EXPECT_TRUE(differs);
}

TEST(RunTest, NoiselessRidgeOnPathMatchesOracle) {
  auto f = RidgeOnPath(5);
  auto clients = InitClients(f.data.datasets, f.topology, f.spec);
  auto cfg = Noiseless(Variant::kZcdpNfl, 1.0, 1.0);
  cfg.T = 500;
  const auto traj = consensus::Run(clients, f.topology, f.spec, cfg, 0);
  // Closed-form ridge optimum assembled here, independent of the oracle solver.
  Matrix h = Matrix::Zero(4, 4);
  Vector b = Vector::Zero(4);
  for (const auto& d : f.data.datasets) {
    const double m = d.num_samples();
    h += 2.0 * d.x.transpose() * d.x / m + 2.0 * f.spec.lambda / 5 * Matrix::Identity(4, 4);
    b += 2.0 * d.x.transpose() * d.y / m;
  }
  const Vector wc = h.ldlt().solve(b);
  EXPECT_LE(harness::NormalizedError(traj.primal.back(), wc), 1e-4);
}

TEST(RunTest, PAdmmNoiselessRidgeConverges) {
  auto f = RidgeOnPath(5);
  auto clients = InitClients(f.data.datasets, f.topology, f.spec);
  auto cfg = Noiseless(Variant::kPAdmm, 1.0, 1.0);
  cfg.T = 500;
  const auto traj = consensus::Run(clients, f.topology, f.spec, cfg, 0);
  const Vector wc = harness::CentralizedOracle(f.data.datasets, f.spec);
  EXPECT_LE(harness::NormalizedError(traj.primal.back(), wc), 1e-4);
}

TEST(RunTest, NoiselessDualSumStaysZero) {
  auto f = RidgeOnPath(7);
  const auto top = graph::RandomConnectedGraph(7, 3.0, 9);
  auto clients = InitClients(f.data.datasets, top, f.spec);
  auto cfg = Noiseless(Variant::kZcdpNfl, 1.3, 0.8);
  cfg.T = 60;
  kernels::ExchangeSerial(clients, 0);
  for (int n = 1; n <= cfg.T; ++n) {
    kernels::LocalStepSerial(clients, f.spec, cfg, 0, n);
    kernels::ExchangeSerial(clients, n);
    kernels::DualStepSerial(clients, cfg);
    Vector total = Vector::Zero(4);
    for (const auto& c : clients) total += c.gamma;
    ASSERT_LE(total.cwiseAbs().maxCoeff(), 1e-10) << "round " << n;
  }
}

// Noiseless exactness on K = 10 for the problems with a smooth or
// composite objective: error decreases after a 20-round burn-in.
class NoiselessExactnessTest : public ::testing::TestWithParam<harness::ProblemKind> {};

TEST_P(NoiselessExactnessTest, MonotoneAfterBurnInAndBelowTolerance) {
  harness::ExperimentConfig cfg;
  cfg.problem = GetParam();
  cfg.num_clients = 10;
  cfg.T = 1000;
  const auto top = graph::RandomConnectedGraph(10, cfg.avg_degree, cfg.topology_seed);
  const auto rep = harness::MakeReplicate(cfg, 0);
  const auto m = harness::RunCell(cfg, top, rep, cfg.MakeAlgo(Variant::kZcdpNfl, std::nullopt), 0);
  for (int n = 21; n < cfg.T; ++n) {
    // Once the error reaches round-off level it may jitter.
    if (m.normalized_error[n - 1] < 1e-20) break;
    EXPECT_LE(m.normalized_error[n], m.normalized_error[n - 1] * (1.0 + 1e-9)) << "round " << n + 1;
  }
  EXPECT_LE(m.normalized_error.back(), 1e-4);
  EXPECT_LE(m.consensus_residual.back(), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Problems, NoiselessExactnessTest,
                         ::testing::Values(harness::ProblemKind::kRidge,
                                           harness::ProblemKind::kElasticNet));

}  // namespace
}  // namespace fednet::consensus
