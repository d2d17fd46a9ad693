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

#include "robustflow/network/network.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <utility>

namespace robustflow::network {
namespace {

// Incremental row-echelon basis. Each accepted vector is reduced against the
// earlier ones, so eliminating a candidate in insertion order zeroes it at
// every pivot column.
class EchelonBasis {
 public:
  EchelonBasis(std::size_t dim, std::size_t num_candidates)
      : dim_(dim), num_candidates_(num_candidates) {}

  // Returns true and stores the vector if it is independent of the basis;
  // otherwise returns false and `combination` holds coefficients c over the
  // candidates with sum_k c_k * candidate_k = 0 (c_index = 1).
  bool Insert(std::span<const double> v, std::size_t index,
              std::vector<double>* combination) {
    std::vector<double> vec(v.begin(), v.end());
    std::vector<double> comb(num_candidates_, 0.0);
    comb[index] = 1.0;
    for (const Entry& b : basis_) {
      const double factor = vec[b.pivot] / b.vec[b.pivot];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < dim_; ++j) vec[j] -= factor * b.vec[j];
      for (std::size_t j = 0; j < num_candidates_; ++j) comb[j] -= factor * b.comb[j];
    }
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (std::abs(vec[j]) > best) {
        best = std::abs(vec[j]);
        pivot = j;
      }
    }
    if (best <= kTolerance) {
      if (combination != nullptr) *combination = std::move(comb);
      return false;
    }
    basis_.push_back({std::move(vec), std::move(comb), pivot});
    return true;
  }

 private:
  struct Entry {
    std::vector<double> vec;
    std::vector<double> comb;
    std::size_t pivot;
  };
  std::size_t dim_;
  std::size_t num_candidates_;
  std::vector<Entry> basis_;
};

}  // namespace

Network::Network(std::size_t n_vertices, std::vector<Edge> edges)
    : n_(n_vertices), edges_(std::move(edges)) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    const std::string where = "edge " + std::to_string(e);
    if (edge.tail >= n_ || edge.head >= n_) {
      throw Error(ErrorCode::kInvalidArgument, where + " references a missing vertex");
    }
    if (edge.tail == edge.head) {
      throw Error(ErrorCode::kInvalidArgument, where + " is a self-loop");
    }
    if (!(edge.capacity > 0.0) || !std::isfinite(edge.capacity)) {
      throw Error(ErrorCode::kNonPositiveCapacity, where + " capacity must be > 0");
    }
    if (!(edge.delay >= 0.0) || !std::isfinite(edge.delay)) {
      throw Error(ErrorCode::kInvalidArgument, where + " delay must be >= 0");
    }
  }
}

std::vector<double> Network::Capacities() const {
  std::vector<double> b;
  b.reserve(edges_.size());
  for (const Edge& e : edges_) b.push_back(e.capacity);
  return b;
}

std::vector<double> Network::Delays() const {
  std::vector<double> c;
  c.reserve(edges_.size());
  for (const Edge& e : edges_) c.push_back(e.delay);
  return c;
}

Network Network::WithCapacities(std::span<const double> capacities) const {
  if (capacities.size() != edges_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one capacity per edge expected");
  }
  std::vector<Edge> edges = edges_;
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].capacity = capacities[e];
  return Network(n_, std::move(edges));
}

DemandMatrix::DemandMatrix(Matrix entries) : d_(std::move(entries)) {
  if (d_.rows() != d_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "demand matrix must be square");
  }
  for (std::size_t i = 0; i < d_.rows(); ++i) {
    for (std::size_t j = 0; j < d_.cols(); ++j) {
      if (!(d_(i, j) >= 0.0) || !std::isfinite(d_(i, j))) {
        throw Error(ErrorCode::kInvalidArgument, "demands must be finite and >= 0");
      }
      if (i == j && d_(i, j) != 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "demand diagonal must be zero");
      }
    }
  }
}

void DemandMatrix::Set(std::size_t i, std::size_t j, double value) {
  if (i >= size() || j >= size()) {
    throw Error(ErrorCode::kInvalidArgument, "demand index out of range");
  }
  if (!(value >= 0.0) || !std::isfinite(value) || (i == j && value != 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid demand value");
  }
  d_(i, j) = value;
}

bool DemandMatrix::IsZero() const { return NumPositive() == 0; }

double DemandMatrix::Total() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (double v : d_.row(i)) total += v;
  }
  return total;
}

std::size_t DemandMatrix::NumPositive() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (double v : d_.row(i)) count += v > 0.0 ? 1 : 0;
  }
  return count;
}

DemandMatrix DemandMatrix::Scaled(double factor) const {
  Matrix scaled = d_;
  for (std::size_t i = 0; i < size(); ++i) {
    for (double& v : scaled.row(i)) v *= factor;
  }
  return DemandMatrix(std::move(scaled));
}

Matrix IncidenceMatrix(const Network& net) {
  Matrix n(net.num_vertices(), net.num_edges());
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    n(net.edge(e).head, e) += 1.0;
    n(net.edge(e).tail, e) -= 1.0;
  }
  return n;
}

DemandLaplacian MakeDemandLaplacian(const DemandMatrix& demands) {
  const std::size_t n = demands.size();
  Matrix l(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == s) continue;
      l(s, s) += demands(s, k);
      l(k, s) -= demands(s, k);
    }
  }
  return l;
}

ReducedSystem RankReduce(const Matrix& incidence, const DemandLaplacian& laplacian) {
  if (laplacian.rows() != incidence.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "incidence and Laplacian rows differ");
  }
  const std::size_t n = incidence.rows();
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : laplacian.row(i)) scale = std::max(scale, std::abs(v));
  }
  ReducedSystem out;
  EchelonBasis basis(incidence.cols(), n);
  std::vector<double> kernel;
  for (std::size_t i = 0; i < n; ++i) {
    if (basis.Insert(incidence.row(i), i, &kernel)) {
      out.kept_rows.push_back(i);
      continue;
    }
    // kernel^T N = 0; the system is consistent only if kernel^T L_D = 0 too.
    for (std::size_t s = 0; s < laplacian.cols(); ++s) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += kernel[k] * laplacian(k, s);
      if (std::abs(acc) > kTolerance * scale * static_cast<double>(n)) {
        out.feasible = false;
      }
    }
  }
  out.reduced_incidence = incidence.SelectRows(out.kept_rows);
  out.reduced_laplacian = laplacian.SelectRows(out.kept_rows);
  return out;
}

std::vector<std::size_t> IndependentColumns(const Matrix& m) {
  EchelonBasis basis(m.rows(), m.cols());
  std::vector<std::size_t> cols;
  std::vector<double> column(m.rows());
  for (std::size_t c = 0; c < m.cols() && cols.size() < m.rows(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) column[r] = m(r, c);
    if (basis.Insert(column, c, nullptr)) cols.push_back(c);
  }
  return cols;
}

namespace {

// Edmonds-Karp on the unit-capacity digraph.
std::size_t UnitMaxFlow(const Network& net, std::size_t source, std::size_t sink) {
  struct Arc {
    std::size_t to;
    int residual;
    std::size_t reverse;
  };
  std::vector<std::vector<Arc>> adj(net.num_vertices());
  for (const Edge& e : net.edges()) {
    adj[e.tail].push_back({e.head, 1, adj[e.head].size()});
    adj[e.head].push_back({e.tail, 0, adj[e.tail].size() - 1});
  }
  std::size_t flow = 0;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> parent(net.num_vertices(),
                                                            {kNone, kNone});
    std::queue<std::size_t> queue;
    queue.push(source);
    parent[source] = {source, kNone};
    while (!queue.empty() && parent[sink].first == kNone) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t k = 0; k < adj[u].size(); ++k) {
        const Arc& arc = adj[u][k];
        if (arc.residual > 0 && parent[arc.to].first == kNone) {
          parent[arc.to] = {u, k};
          queue.push(arc.to);
        }
      }
    }
    if (parent[sink].first == kNone) return flow;
    for (std::size_t v = sink; v != source;) {
      const auto [u, k] = parent[v];
      Arc& arc = adj[u][k];
      arc.residual -= 1;
      adj[arc.to][arc.reverse].residual += 1;
      v = u;
    }
    ++flow;
  }
}

}  // namespace

std::size_t DemandEdgeConnectivity(const Network& net, const DemandMatrix& demands) {
  if (demands.size() != net.num_vertices()) {
    throw Error(ErrorCode::kDimensionMismatch, "demand matrix size != vertex count");
  }
  if (demands.IsZero()) throw Error(ErrorCode::kNoDemand, "all demands are zero");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t s = 0; s < demands.size(); ++s) {
    for (std::size_t t = 0; t < demands.size(); ++t) {
      if (demands(s, t) > 0.0) best = std::min(best, UnitMaxFlow(net, s, t));
    }
  }
  return best;
}

}  // namespace robustflow::network
