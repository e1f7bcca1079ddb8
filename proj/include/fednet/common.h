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
#ifndef FEDNET_COMMON_H_
#define FEDNET_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fednet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised when a caller-supplied parameter violates a precondition. The CLI
// maps these to exit code 1.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical routine fails to reach its tolerance or a run
// cannot proceed for reasons other than bad input (exit code 2).
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

using Rng = std::mt19937_64;

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Mixes a base seed with two stream coordinates. Streams for distinct
// (a, b) pairs are independent of the order in which they are requested.
inline uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return SplitMix64(SplitMix64(SplitMix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

inline Rng MakeStream(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return Rng(DeriveSeed(seed, a, b));
}

}  // namespace fednet

#endif  // FEDNET_COMMON_H_
