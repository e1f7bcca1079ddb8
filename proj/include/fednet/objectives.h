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
#ifndef FEDNET_OBJECTIVES_H_
#define FEDNET_OBJECTIVES_H_

#include <limits>
#include <string>

#include "fednet/common.h"

namespace fednet {

// One client's private data: rows of x are samples, y the targets.
struct Dataset {
  Matrix x;
  Vector y;

  int num_samples() const { return static_cast<int>(x.rows()); }
  int num_features() const { return static_cast<int>(x.cols()); }
  void Validate() const;
};

enum class LossKind { kSquared, kAbsolute };
enum class RegKind { kElasticNet, kL2, kNone };

// Local objective f_k(w) = loss(X, y; w) / M_k + (lambda / K) R(w) with
//   squared:  loss = ||Xw - y||^2       absolute: loss = ||Xw - y||_1
//   elastic:  R = l1 ||w||_1 + l2 ||w||^2
//   l2:       R = ||w||^2
//   none:     R = 0
struct ProblemSpec {
  LossKind loss = LossKind::kSquared;
  RegKind reg = RegKind::kNone;
  double lambda = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  // Bound on per-sample loss subgradients once clipping is applied.
  double c1 = 1.0;
  int num_clients = 1;

  void Validate() const;
  // Coefficient of ||w||^2 inside R.
  double QuadraticRegCoefficient() const;
  bool IsRidge() const { return loss == LossKind::kSquared && reg == RegKind::kL2; }
};

std::string ToString(LossKind kind);
std::string ToString(RegKind kind);

namespace objectives {

inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

// Subgradient of the summed loss: 2 X^T (Xw - y) or X^T sign(Xw - y),
// with sign(0) = 0.
Vector LossSubgrad(const ProblemSpec& spec, const Dataset& data, const Vector& w);

// Subgradient of R alone (without lambda / K).
Vector RegSubgrad(const ProblemSpec& spec, const Vector& w);

double LossValue(const ProblemSpec& spec, const Dataset& data, const Vector& w);
double RegValue(const ProblemSpec& spec, const Vector& w);
double LocalObjective(const ProblemSpec& spec, const Dataset& data, const Vector& w);

// Returns g scaled onto the ball of radius c1 when ||g|| > c1.
Vector ClipSubgrad(Vector g, double c1);

// Sum of row norms: bounds ||X^T s|| for every sign vector s. Only defined
// for the absolute loss.
double AnalyticC1(const Dataset& data, LossKind loss);

// Mean of per-sample loss subgradients, each clipped to norm c1 first.
// Replacing one sample moves the result by at most 2 c1 / M.
Vector ClippedMeanLossSubgrad(const ProblemSpec& spec, const Dataset& data,
                              const Vector& w, double c1);

// g_k = clipped mean loss subgradient + (lambda / K) R'(w). Pass kNoClip to
// use the exact mean.
Vector LocalSubgrad(const ProblemSpec& spec, const Dataset& data, const Vector& w,
                    double c1);

}  // namespace objectives
}  // namespace fednet

#endif  // FEDNET_OBJECTIVES_H_
