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
#include "fednet/objectives.h"

#include <cmath>

namespace fednet {
namespace {

double Sign(double v) { return (v > 0.0) - (v < 0.0); }

void CheckDims(const Dataset& data, const Vector& w) {
  Require(data.x.cols() == w.size(),
          "dimension mismatch: X has " + std::to_string(data.x.cols()) +
              " columns, w has " + std::to_string(w.size()) + " entries");
  Require(data.x.rows() == data.y.size(), "dimension mismatch: rows of X vs length of y");
}

}  // namespace

void Dataset::Validate() const {
  Require(x.rows() == y.size(), "dataset: rows of X must equal length of y");
  Require(x.rows() > 0, "dataset: no samples");
  Require(x.allFinite() && y.allFinite(), "dataset: non-finite entries");
}

void ProblemSpec::Validate() const {
  Require(c1 > 0.0, "c1 must be positive");
  Require(lambda > 0.0, "lambda must be positive");
  Require(lambda1 >= 0.0 && lambda2 >= 0.0, "lambda1 and lambda2 must be nonnegative");
  Require(reg != RegKind::kL2 || lambda1 == 0.0, "lambda1 must be 0 for the l2 regularizer");
  Require(num_clients >= 1, "num_clients must be positive");
}

double ProblemSpec::QuadraticRegCoefficient() const {
  switch (reg) {
    case RegKind::kElasticNet: return lambda2;
    case RegKind::kL2: return 1.0;
    case RegKind::kNone: return 0.0;
  }
  return 0.0;
}

std::string ToString(LossKind kind) {
  return kind == LossKind::kSquared ? "squared" : "absolute";
}

std::string ToString(RegKind kind) {
  switch (kind) {
    case RegKind::kElasticNet: return "l1_plus_l2";
    case RegKind::kL2: return "l2";
    case RegKind::kNone: return "none";
  }
  return "none";
}

namespace objectives {

Vector LossSubgrad(const ProblemSpec& spec, const Dataset& data, const Vector& w) {
  CheckDims(data, w);
  const Vector residual = data.x * w - data.y;
  if (spec.loss == LossKind::kSquared) return 2.0 * data.x.transpose() * residual;
  return data.x.transpose() * residual.unaryExpr(&Sign);
}

Vector RegSubgrad(const ProblemSpec& spec, const Vector& w) {
  switch (spec.reg) {
    case RegKind::kElasticNet:
      return spec.lambda1 * w.unaryExpr(&Sign) + 2.0 * spec.lambda2 * w;
    case RegKind::kL2:
      return 2.0 * w;
    case RegKind::kNone:
      break;
  }
  return Vector::Zero(w.size());
}

double LossValue(const ProblemSpec& spec, const Dataset& data, const Vector& w) {
  CheckDims(data, w);
  const Vector residual = data.x * w - data.y;
  return spec.loss == LossKind::kSquared ? residual.squaredNorm()
                                         : residual.lpNorm<1>();
}

double RegValue(const ProblemSpec& spec, const Vector& w) {
  switch (spec.reg) {
    case RegKind::kElasticNet:
      return spec.lambda1 * w.lpNorm<1>() + spec.lambda2 * w.squaredNorm();
    case RegKind::kL2:
      return w.squaredNorm();
    case RegKind::kNone:
      break;
  }
  return 0.0;
}

double LocalObjective(const ProblemSpec& spec, const Dataset& data, const Vector& w) {
  return LossValue(spec, data, w) / data.num_samples() +
         spec.lambda / spec.num_clients * RegValue(spec, w);
}

Vector ClipSubgrad(Vector g, double c1) {
  const double norm = g.norm();
  if (norm > c1) g *= c1 / norm;
  return g;
}

double AnalyticC1(const Dataset& data, LossKind loss) {
  Require(loss == LossKind::kAbsolute,
          "analytic c1 exists only for the absolute loss; use clipping for squared loss");
  return data.x.rowwise().norm().sum();
}

Vector ClippedMeanLossSubgrad(const ProblemSpec& spec, const Dataset& data,
                              const Vector& w, double c1) {
  CheckDims(data, w);
  if (!std::isfinite(c1)) return LossSubgrad(spec, data, w) / data.num_samples();
  const Vector residual = data.x * w - data.y;
  Vector sum = Vector::Zero(w.size());
  for (int j = 0; j < data.num_samples(); ++j) {
    const double scale = spec.loss == LossKind::kSquared ? 2.0 * residual(j)
                                                         : Sign(residual(j));
    const double norm = std::abs(scale) * data.x.row(j).norm();
    const double factor = norm > c1 ? c1 / norm : 1.0;
    sum += (factor * scale) * data.x.row(j).transpose();
  }
  return sum / data.num_samples();
}

Vector LocalSubgrad(const ProblemSpec& spec, const Dataset& data, const Vector& w,
                    double c1) {
  return ClippedMeanLossSubgrad(spec, data, w, c1) +
         spec.lambda / spec.num_clients * RegSubgrad(spec, w);
}

}  // namespace objectives
}  // namespace fednet
