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

// Nominal flow LPs on a network: maximal concurrent flow (throughput), load
// balance and linear average latency.
//
// The throughput LP is solved in standard form
//
//   min -lambda  s.t.  N~ F = -lambda L~_D,  F 1 + slack = b,  F, slack, lambda >= 0,
//
// where N~, L~_D keep an independent subset of the vertex balance rows. Its
// starting tableau is written down in closed form from a regular column
// block N~_eta of the reduced incidence matrix: the vertex F = 0,
// slack = b is feasible, so no phase 1 is needed.

#ifndef ROBUSTFLOW_FLOW_FLOW_LP_H_
#define ROBUSTFLOW_FLOW_FLOW_LP_H_

#include <cstddef>
#include <span>
#include <vector>

#include "robustflow/common.h"
#include "robustflow/lp/simplex.h"
#include "robustflow/network/network.h"

namespace robustflow::flow {

// Flow f(e, s) of commodity s on edge e; m x n.
using FlowMatrix = Matrix;

// Variable numbering of the throughput LP. Tableau constraint e is the
// capacity constraint of edge e.
class ThroughputLayout {
 public:
  enum class Kind { kFlow, kSlack, kLambda };
  struct VarInfo {
    Kind kind;
    std::size_t edge;    // kFlow, kSlack
    std::size_t source;  // kFlow
  };

  ThroughputLayout() = default;
  ThroughputLayout(std::size_t n_vertices, std::size_t n_edges)
      : n_(n_vertices), m_(n_edges) {}

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return m_; }
  std::size_t flow_var(std::size_t edge, std::size_t source) const {
    return source * m_ + edge;
  }
  std::size_t slack_var(std::size_t edge) const { return n_ * m_ + edge; }
  std::size_t lambda_var() const { return n_ * m_ + m_; }
  std::size_t num_variables() const { return n_ * m_ + m_ + 1; }

  VarInfo Describe(std::size_t var) const;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
};

struct ThroughputTableau {
  lp::SimplexTableau tableau;
  ThroughputLayout layout;
  std::vector<std::size_t> kept_rows;  // R
  std::vector<std::size_t> eta;        // basic flow columns
};

// Initial primal-feasible tableau of the throughput LP. `capacities` may
// override the network's (entries >= 0, so deleted edges can be modelled).
// Throws kNoDemand for a zero demand matrix, kInfeasibleSystem when the
// balance equations force lambda = 0, kNoIndependentColumns if no regular
// column block exists.
ThroughputTableau BuildThroughputTableau(const network::Network& net,
                                         const network::DemandMatrix& demands);
ThroughputTableau BuildThroughputTableau(const network::Network& net,
                                         const network::DemandMatrix& demands,
                                         std::span<const double> capacities);

struct ThroughputSolution {
  double lambda_star = 0.0;
  FlowMatrix flows;
  lp::SimplexTableau tableau;
  ThroughputLayout layout;
  std::size_t pivot_count = 0;
};

ThroughputSolution SolveThroughput(const network::Network& net,
                                   const network::DemandMatrix& demands);
ThroughputSolution SolveThroughput(const network::Network& net,
                                   const network::DemandMatrix& demands,
                                   std::span<const double> capacities);

FlowMatrix ExtractFlows(const lp::SimplexTableau& tableau,
                        const ThroughputLayout& layout);

// Per-edge totals F 1.
std::vector<double> EdgeLoads(const FlowMatrix& flows);

struct LoadBalanceSolution {
  double theta_star = 0.0;
  FlowMatrix flows;
};

// theta* = 1 / lambda*, F_theta = F_lambda / lambda*.
// Throws kZeroThroughput if lambda* is zero.
LoadBalanceSolution LoadBalanceFromThroughput(const ThroughputSolution& sol);

enum class LatencyKind { kLinear, kInverse, kLog };

struct LatencyConfig {
  LatencyKind kind = LatencyKind::kLinear;
  double beta = 0.9;      // load ratio in (0, 1]
  double alpha_c = 1e-6;  // scale applied to the inverse latency

  // Throws kInvalidArgument when beta or alpha_c is out of range.
  void Validate() const;
};

// Sum over edges of the per-edge delay for edge totals `edge_flows`:
//   kLinear   c_e f_e
//   kInverse  alpha_c c_e f_e / (1 - f_e / b_e)
//   kLog      c_e (1 - log(1 - f_e / b_e))
// Throws kSaturatedEdge if f_e >= b_e for kInverse/kLog.
double EvalLatency(std::span<const double> edge_flows, const network::Network& net,
                   const LatencyConfig& config);

// Optimal tableau of  min sum_e delay_e (F 1)_e  s.t.  F 1 <= capacities,
// N F = -demand_scale L_D. Built from the solved throughput tableau: a cut
// lambda <= demand_scale is added and re-optimized by the dual simplex, its
// slack is fixed to zero, and the delay objective is optimized by the primal
// simplex from that vertex. Constraint e remains edge e's capacity.
// Throws kInfeasibleSystem if the throughput is below demand_scale.
struct MinDelayLP {
  lp::SimplexTableau tableau;
  ThroughputLayout layout;
  double throughput = 0.0;  // lambda_max at `capacities`
  std::size_t pivot_count = 0;
};

MinDelayLP SolveMinDelay(const network::Network& net,
                         const network::DemandMatrix& demands,
                         std::span<const double> capacities, double demand_scale,
                         std::span<const double> delays);

struct LatencySolution {
  double latency = 0.0;        // total delay / normalization
  double total_delay = 0.0;    // sum_e c_e (F 1)_e
  double normalization = 0.0;  // beta * lambda_max * 1^T D 1
  FlowMatrix flows;
  lp::SimplexTableau tableau;
  ThroughputLayout layout;
  std::size_t pivot_count = 0;
};

// Average latency with linear delays at load ratio config.beta of
// `lambda_max`. Throws kInvalidArgument unless config.kind is kLinear and
// the normalization is positive.
LatencySolution SolveLatencyLinear(const network::Network& net,
                                   const network::DemandMatrix& demands,
                                   const LatencyConfig& config, double lambda_max);

}  // namespace robustflow::flow

#endif  // ROBUSTFLOW_FLOW_FLOW_LP_H_
