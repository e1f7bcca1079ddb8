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
#include "fednet/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fednet::harness {
namespace {


struct PooledQuadratic {
  Matrix hessian;  // sum_k 2 X_k^T X_k / M_k
  Vector linear;   // sum_k 2 X_k^T y_k / M_k
};

PooledQuadratic Pool(std::span<const Dataset> datasets) {
  const int p = datasets.front().num_features();
  PooledQuadratic q{Matrix::Zero(p, p), Vector::Zero(p)};
  for (const Dataset& d : datasets) {
    const double scale = 2.0 / d.num_samples();
    q.hessian += scale * d.x.transpose() * d.x;
    q.linear += scale * d.x.transpose() * d.y;
  }
  return q;
}

Vector SolveSquared(std::span<const Dataset> datasets, const ProblemSpec& spec) {
  PooledQuadratic q = Pool(datasets);
  q.hessian.diagonal().array() += 2.0 * spec.lambda * spec.QuadraticRegCoefficient();
  return q.hessian.colPivHouseholderQr().solve(q.linear);
}

Vector SolveElasticNet(std::span<const Dataset> datasets, const ProblemSpec& spec,
                       double tol, int max_iterations) {
  PooledQuadratic q = Pool(datasets);
  q.hessian.diagonal().array() += 2.0 * spec.lambda * spec.lambda2;
  const double lipschitz =
      Eigen::SelfAdjointEigenSolver<Matrix>(q.hessian, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .maxCoeff();
  const double step = 1.0 / lipschitz;
  const double threshold = step * spec.lambda * spec.lambda1;

  Vector w = Vector::Zero(q.linear.size());
  for (int it = 0; it < max_iterations; ++it) {
    const Vector forward = w - step * (q.hessian * w - q.linear);
    const Vector next =
        forward.unaryExpr([threshold](double v) {
          return std::copysign(std::max(std::abs(v) - threshold, 0.0), v);
        });
    const double moved = (next - w).norm();
    w = next;
    if (moved < tol) return w;
  }
  throw RuntimeFailure("elastic-net oracle did not reach tolerance");
}

struct StackedRows {
  Matrix x;
  Vector y;
  Vector weight;  // 1 / M_k for every row of client k
};

StackedRows Stack(std::span<const Dataset> datasets) {
  Eigen::Index rows = 0;
  for (const Dataset& d : datasets) rows += d.num_samples();
  const auto p = datasets.front().x.cols();
  StackedRows s{Matrix(rows, p), Vector(rows), Vector(rows)};
  Eigen::Index at = 0;
  for (const Dataset& d : datasets) {
    s.x.middleRows(at, d.num_samples()) = d.x;
    s.y.segment(at, d.num_samples()) = d.y;
    s.weight.segment(at, d.num_samples()).setConstant(1.0 / d.num_samples());
    at += d.num_samples();
  }
  return s;
}

double LadObjective(const StackedRows& s, double ridge, const Vector& w) {
  return (s.x * w - s.y).cwiseAbs().dot(s.weight) + ridge * w.squaredNorm();
}

// Without a quadratic term an optimum sits where P residuals vanish. Try
// the P rows closest to zero residual and keep the vertex if it is no worse.
Vector PolishVertex(const StackedRows& s, const Vector& w) {
  const auto p = w.size();
  if (s.x.rows() < p) return w;
  const Vector residual = (s.x * w - s.y).cwiseAbs();
  std::vector<Eigen::Index> order(residual.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + p, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) { return residual(a) < residual(b); });
  Matrix sub(p, p);
  Vector rhs(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    sub.row(i) = s.x.row(order[i]);
    rhs(i) = s.y(order[i]);
  }
  Eigen::FullPivLU<Matrix> lu(sub);
  if (!lu.isInvertible()) return w;
  const Vector vertex = lu.solve(rhs);
  return LadObjective(s, 0.0, vertex) <= LadObjective(s, 0.0, w) ? vertex : w;
}

Vector SolveLad(std::span<const Dataset> datasets, const ProblemSpec& spec, double tol,
                int max_iterations) {
  const StackedRows s = Stack(datasets);
  const double ridge = spec.lambda * spec.QuadraticRegCoefficient();
  const auto p = s.x.cols();

  auto weighted_solve = [&](const Vector& row_weight) {
    Matrix lhs = s.x.transpose() * row_weight.asDiagonal() * s.x;
    lhs.diagonal().array() += 2.0 * ridge;
    return Vector(lhs.ldlt().solve(s.x.transpose() * row_weight.asDiagonal() * s.y));
  };

  Vector w = weighted_solve(s.weight);
  double floor = std::max(1e-3, (s.x * w - s.y).cwiseAbs().maxCoeff() * 1e-2);
  constexpr double kFinalFloor = 1e-12;
  double objective = LadObjective(s, ridge, w);
  for (int it = 0; it < max_iterations; ++it) {
    const Vector residual = (s.x * w - s.y).cwiseAbs().cwiseMax(floor);
    w = weighted_solve(s.weight.cwiseQuotient(residual));
    const double next = LadObjective(s, ridge, w);
    const double change = std::abs(objective - next);
    objective = next;
    if (change <= tol * 1e-3 * std::max(1.0, objective)) {
      if (floor <= kFinalFloor) {
        return ridge == 0.0 && p > 0 ? PolishVertex(s, w) : w;
      }
      floor = std::max(kFinalFloor, floor * 1e-2);
    }
  }
  throw RuntimeFailure("LAD oracle did not reach tolerance");
}

}  // namespace

SyntheticData GenerateSynthetic(int num_clients, int samples_per_client, int num_features,
                                double noise_std, uint64_t seed) {
  Require(num_clients > 0 && samples_per_client > 0 && num_features > 0,
          "synthetic data requires positive K, M_k and P");
  Require(noise_std >= 0.0, "noise_std must be nonnegative");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&] { return normal(rng); };

  SyntheticData out;
  out.true_w = Vector::NullaryExpr(num_features, draw);
  out.datasets.reserve(num_clients);
  for (int k = 0; k < num_clients; ++k) {
    Dataset d;
    d.x = Matrix::NullaryExpr(samples_per_client, num_features, draw);
    d.y = d.x * out.true_w;
    if (noise_std > 0.0) {
      for (int j = 0; j < samples_per_client; ++j) d.y(j) += noise_std * normal(rng);
    }
    out.datasets.push_back(std::move(d));
  }
  return out;
}

double DefaultLambda1(std::span<const Dataset> datasets) {
  Require(!datasets.empty(), "no datasets");
  Vector xty = Vector::Zero(datasets.front().num_features());
  for (const Dataset& d : datasets) xty += d.x.transpose() * d.y;
  return 1e-3 * xty.lpNorm<Eigen::Infinity>();
}

double GlobalObjective(std::span<const Dataset> datasets, const ProblemSpec& spec,
                       const Vector& w) {
  double total = 0.0;
  for (const Dataset& d : datasets) total += objectives::LocalObjective(spec, d, w);
  return total;
}

Vector CentralizedOracle(std::span<const Dataset> datasets, const ProblemSpec& spec,
                         double tol, int max_iterations) {
  Require(!datasets.empty(), "oracle needs at least one dataset");
  Require(max_iterations >= 1, "oracle iteration cap must be positive");
  spec.Validate();
  for (const Dataset& d : datasets) {
    d.Validate();
    Require(d.num_features() == datasets.front().num_features(),
            "all datasets must share the feature dimension");
  }
  if (spec.loss == LossKind::kSquared) {
    if (spec.reg == RegKind::kElasticNet && spec.lambda1 > 0.0) {
      return SolveElasticNet(datasets, spec, tol > 0.0 ? tol : 1e-8, max_iterations);
    }
    return SolveSquared(datasets, spec);
  }
  Require(spec.reg != RegKind::kElasticNet || spec.lambda1 == 0.0,
          "oracle: absolute loss with an l1 penalty is not supported");
  return SolveLad(datasets, spec, tol > 0.0 ? tol : 1e-6, max_iterations);
}

double NormalizedError(std::span<const Vector> models, const Vector& wc) {
  const double scale = wc.squaredNorm();
  Require(scale > 0.0, "normalized error needs a nonzero reference model");
  double total = 0.0;
  for (const Vector& w : models) total += (w - wc).squaredNorm();
  return total / scale;
}

}  // namespace fednet::harness
