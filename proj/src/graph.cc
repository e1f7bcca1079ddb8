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
#include "fednet/graph.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

namespace fednet::graph {

Topology::Topology(int num_clients, std::vector<Edge> edges)
    : num_clients_(num_clients), neighbors_(num_clients > 0 ? num_clients : 0) {
  Require(num_clients >= 1, "num_clients must be positive");
  for (auto& [a, b] : edges) {
    Require(a >= 0 && a < num_clients && b >= 0 && b < num_clients,
            "edge endpoint out of range: (" + std::to_string(a) + "," +
                std::to_string(b) + ")");
    Require(a != b, "self-loop at node " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  Require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(),
          "duplicate edge in topology");
  edges_ = std::move(edges);
  for (const auto& [a, b] : edges_) {
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

double Topology::mean_degree() const {
  return 2.0 * static_cast<double>(edges_.size()) / num_clients_;
}

bool Topology::HasEdge(int k, int l) const {
  if (k > l) std::swap(k, l);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{k, l});
}

bool Topology::IsConnected() const {
  std::vector<char> seen(num_clients_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const int k = frontier.front();
    frontier.pop();
    for (int l : neighbors_[k]) {
      if (!seen[l]) {
        seen[l] = 1;
        ++visited;
        frontier.push(l);
      }
    }
  }
  return visited == num_clients_;
}

Topology RandomConnectedGraph(int num_clients, double avg_degree, uint64_t seed) {
  Require(num_clients >= 2, "K must be at least 2");
  Require(avg_degree >= 2.0 && avg_degree <= num_clients,
          "avg_degree must lie in [2, K]");
  Rng rng(seed);
  const int64_t max_edges = int64_t{num_clients} * (num_clients - 1) / 2;
  const int64_t target = std::min<int64_t>(
      max_edges, static_cast<int64_t>(std::ceil(num_clients * avg_degree / 2.0)));

  std::vector<int> order(num_clients);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Edge> edges;
  edges.reserve(target);
  std::vector<std::vector<char>> used(num_clients, std::vector<char>(num_clients, 0));
  for (int i = 1; i < num_clients; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    const int a = order[i];
    const int b = order[pick(rng)];
    edges.emplace_back(std::min(a, b), std::max(a, b));
    used[a][b] = used[b][a] = 1;
  }

  std::vector<Edge> candidates;
  for (int a = 0; a < num_clients; ++a)
    for (int b = a + 1; b < num_clients; ++b)
      if (!used[a][b]) candidates.emplace_back(a, b);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const auto extra = static_cast<size_t>(target - static_cast<int64_t>(edges.size()));
  edges.insert(edges.end(), candidates.begin(),
               candidates.begin() + std::min(extra, candidates.size()));
  return Topology(num_clients, std::move(edges));
}

Topology PathGraph(int num_clients) {
  std::vector<Edge> edges;
  for (int k = 0; k + 1 < num_clients; ++k) edges.emplace_back(k, k + 1);
  return Topology(num_clients, std::move(edges));
}

LaplacianSet BuildLaplacians(const Topology& topology) {
  Require(topology.IsConnected(), "topology is disconnected");
  const int k_nodes = topology.num_clients();
  const int arcs = 2 * topology.num_edges();

  // Row q of A1 (resp. A2) selects the source (resp. target) of arc q.
  Matrix a1 = Matrix::Zero(arcs, k_nodes);
  Matrix a2 = Matrix::Zero(arcs, k_nodes);
  int q = 0;
  for (const auto& [k, l] : topology.edges()) {
    a1(q, k) = 1.0;
    a2(q, l) = 1.0;
    ++q;
    a1(q, l) = 1.0;
    a2(q, k) = 1.0;
    ++q;
  }

  LaplacianSet set;
  set.h_plus = a1.transpose() + a2.transpose();
  set.h_minus = a1.transpose() - a2.transpose();
  set.l_plus = 0.5 * set.h_plus * set.h_plus.transpose();
  set.l_minus = 0.5 * set.h_minus * set.h_minus.transpose();
  set.degree = 0.5 * (set.l_plus + set.l_minus);
  set.q = PsdSqrt(0.5 * set.l_minus);
  return set;
}

Matrix PsdSqrt(const Matrix& s) {
  Require(s.rows() == s.cols(), "PsdSqrt expects a square matrix");
  Require((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
          "PsdSqrt expects a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  Require(eig.info() == Eigen::Success, "eigendecomposition failed");
  Vector values = eig.eigenvalues();
  Require(values.minCoeff() >= -1e-10, "matrix is not positive semidefinite");
  // Round-off leaves nullspace eigenvalues near +-1e-16; their square roots
  // (~1e-8) would leak into R, so everything within 1e-10 of zero is zeroed.
  values = values.unaryExpr([](double v) { return v <= 1e-10 ? 0.0 : std::sqrt(v); });
  Matrix root = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

void WriteEdgeList(std::ostream& out, const Topology& topology) {
  out << topology.num_clients() << ' ' << topology.num_edges() << '\n';
  for (const auto& [k, l] : topology.edges()) out << k << ' ' << l << '\n';
}

Topology ReadEdgeList(std::istream& in) {
  int num_clients = 0;
  int num_edges = 0;
  Require(static_cast<bool>(in >> num_clients >> num_edges),
          "edge list: missing \"K E\" header");
  Require(num_edges >= 0, "edge list: negative edge count");
  std::vector<Edge> edges;
  edges.reserve(num_edges);
  for (int e = 0; e < num_edges; ++e) {
    int k = 0;
    int l = 0;
    Require(static_cast<bool>(in >> k >> l),
            "edge list: expected " + std::to_string(num_edges) + " edges, got " +
                std::to_string(e));
    edges.emplace_back(k, l);
  }
  return Topology(num_clients, std::move(edges));
}

}  // namespace fednet::graph
