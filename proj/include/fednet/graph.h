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
#ifndef FEDNET_GRAPH_H_
#define FEDNET_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "fednet/common.h"

namespace fednet::graph {

using Edge = std::pair<int, int>;

// Undirected simple graph over clients 0..K-1. Edges are stored with
// first < second and sorted; neighbor lists are sorted ascending.
class Topology {
 public:
  // Throws ParameterError on self-loops, duplicate edges or out-of-range
  // endpoints. Connectivity is not required here; see IsConnected().
  Topology(int num_clients, std::vector<Edge> edges);

  int num_clients() const { return num_clients_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int k) const { return neighbors_.at(k); }
  int degree(int k) const { return static_cast<int>(neighbors_.at(k).size()); }
  double mean_degree() const;
  bool HasEdge(int k, int l) const;
  bool IsConnected() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.num_clients_ == b.num_clients_ && a.edges_ == b.edges_;
  }

 private:
  int num_clients_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

// Spanning-tree backbone over a random node order, then uniformly drawn
// extra edges until ceil(K * avg_degree / 2) edges exist (capped at the
// complete graph). Requires K >= 2 and 2 <= avg_degree <= K.
Topology RandomConnectedGraph(int num_clients, double avg_degree, uint64_t seed);

Topology PathGraph(int num_clients);

// Matrix apparatus of the edge-consensus reformulation. With one auxiliary
// variable per directed arc, H+ and H- are K x 2E incidence-like matrices.
struct LaplacianSet {
  Matrix h_plus;
  Matrix h_minus;
  Matrix l_plus;   // signless Laplacian D + A
  Matrix l_minus;  // signed Laplacian D - A
  Matrix degree;   // M = (L+ + L-) / 2
  Matrix q;        // principal square root of L- / 2
};

// Throws ParameterError on a disconnected topology.
LaplacianSet BuildLaplacians(const Topology& topology);

// Symmetric PSD square root via eigendecomposition. Eigenvalues in
// [-1e-10, 1e-10] are treated as zero; anything below -1e-10 is rejected.
Matrix PsdSqrt(const Matrix& s);

// Edge-list text format: "K E" on the first line, then E lines "k l".
void WriteEdgeList(std::ostream& out, const Topology& topology);
Topology ReadEdgeList(std::istream& in);

}  // namespace fednet::graph

#endif  // FEDNET_GRAPH_H_
