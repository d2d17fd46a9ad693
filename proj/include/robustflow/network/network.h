// Copyright 2026 The robustflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUSTFLOW_NETWORK_NETWORK_H_
#define ROBUSTFLOW_NETWORK_NETWORK_H_

#include <cstddef>
#include <span>
#include <vector>

#include "robustflow/common.h"

namespace robustflow::network {

struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;
  double capacity = 0.0;  // b_e > 0
  double delay = 0.0;     // c_e >= 0, time per unit of flow
};

// Directed multigraph. Parallel edges are distinct by index; self-loops and
// non-positive capacities are rejected at construction.
class Network {
 public:
  Network() = default;
  Network(std::size_t n_vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  std::vector<double> Capacities() const;
  std::vector<double> Delays() const;

  // Same topology with capacities replaced; entries must be > 0.
  Network WithCapacities(std::span<const double> capacities) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

// n x n matrix of non-negative demands d_ij with zero diagonal.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  explicit DemandMatrix(std::size_t n) : d_(n, n) {}
  // Throws kInvalidArgument on negative entries or a non-zero diagonal.
  explicit DemandMatrix(Matrix entries);

  std::size_t size() const { return d_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }
  void Set(std::size_t i, std::size_t j, double value);

  const Matrix& entries() const { return d_; }
  bool IsZero() const;
  double Total() const;  // 1^T D 1
  std::size_t NumPositive() const;
  DemandMatrix Scaled(double factor) const;

 private:
  Matrix d_;
};

// Column s carries the balance right-hand side of source s:
// L(s, s) = sum_k d_sk and L(i, s) = -d_si for i != s.
using DemandLaplacian = Matrix;

struct ReducedSystem {
  std::vector<std::size_t> kept_rows;  // R, ascending
  Matrix reduced_incidence;            // N restricted to R
  Matrix reduced_laplacian;            // L_D restricted to R
  bool feasible = true;
};

// n x m, column e has +1 at head(e) and -1 at tail(e), so that (N F)(i, s)
// is inflow minus outflow of commodity s at vertex i.
Matrix IncidenceMatrix(const Network& net);

DemandLaplacian MakeDemandLaplacian(const DemandMatrix& demands);

// Keeps the lowest-index rows of `incidence` that are linearly independent
// (pivot tolerance kTolerance). `feasible` is false when some left-kernel
// vector of the incidence matrix does not annihilate the Laplacian, i.e.
// the balance equations N F = -lambda L_D force lambda = 0.
ReducedSystem RankReduce(const Matrix& incidence, const DemandLaplacian& laplacian);

// Lowest-index columns of `m` forming a maximal independent set.
std::vector<std::size_t> IndependentColumns(const Matrix& m);

// Minimum over demand pairs (s, t) with d_st > 0 of the number of edges
// whose removal disconnects t from s (unit-capacity max flow).
// Throws kNoDemand if all demands are zero.
std::size_t DemandEdgeConnectivity(const Network& net, const DemandMatrix& demands);

}  // namespace robustflow::network

#endif  // ROBUSTFLOW_NETWORK_NETWORK_H_
