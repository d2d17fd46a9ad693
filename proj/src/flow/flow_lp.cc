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

#include "robustflow/flow/flow_lp.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace robustflow::flow {

using network::DemandMatrix;
using network::Network;

ThroughputLayout::VarInfo ThroughputLayout::Describe(std::size_t var) const {
  if (var < n_ * m_) return {Kind::kFlow, var % m_, var / m_};
  if (var < n_ * m_ + m_) return {Kind::kSlack, var - n_ * m_, 0};
  if (var == lambda_var()) return {Kind::kLambda, 0, 0};
  throw Error(ErrorCode::kInvalidArgument, "variable outside throughput layout");
}

ThroughputTableau BuildThroughputTableau(const Network& net,
                                         const DemandMatrix& demands) {
  const std::vector<double> b = net.Capacities();
  return BuildThroughputTableau(net, demands, b);
}

ThroughputTableau BuildThroughputTableau(const Network& net,
                                         const DemandMatrix& demands,
                                         std::span<const double> capacities) {
  const std::size_t n = net.num_vertices();
  const std::size_t m = net.num_edges();
  if (demands.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "demand matrix size != vertex count");
  }
  if (capacities.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "one capacity per edge expected");
  }
  for (double v : capacities) {
    if (!(v >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "capacities must be >= 0");
  }
  if (demands.IsZero()) {
    throw Error(ErrorCode::kNoDemand, "throughput needs at least one positive demand");
  }

  const network::ReducedSystem reduced = network::RankReduce(
      network::IncidenceMatrix(net), network::MakeDemandLaplacian(demands));
  if (!reduced.feasible) {
    throw Error(ErrorCode::kInfeasibleSystem,
                "some demand pair lies in different components of the graph");
  }
  const std::size_t nr = reduced.kept_rows.size();
  std::vector<std::size_t> eta = network::IndependentColumns(reduced.reduced_incidence);
  if (eta.size() != nr || nr == 0) {
    throw Error(ErrorCode::kNoIndependentColumns,
                "reduced incidence matrix has no regular column block");
  }
  std::vector<std::size_t> eta_bar;
  for (std::size_t e = 0, k = 0; e < m; ++e) {
    if (k < eta.size() && eta[k] == e) {
      ++k;
    } else {
      eta_bar.push_back(e);
    }
  }
  const std::size_t nb = eta_bar.size();

  // [M | G] = N~_eta^{-1} [N~_etabar | L~_D].
  Matrix rhs_block(nr, nb + n);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      rhs_block(i, j) = reduced.reduced_incidence(i, eta_bar[j]);
    }
    for (std::size_t s = 0; s < n; ++s) {
      rhs_block(i, nb + s) = reduced.reduced_laplacian(i, s);
    }
  }
  const Matrix solved =
      SolveLinear(reduced.reduced_incidence.SelectCols(eta), rhs_block);
  auto mcoef = [&](std::size_t i, std::size_t j) { return solved(i, j); };
  auto gcoef = [&](std::size_t i, std::size_t s) { return solved(i, nb + s); };

  const ThroughputLayout layout(n, m);
  const std::size_t rows = n * nr + m;
  const std::size_t cols = n * nb + 1;
  const std::size_t lambda_col = cols - 1;

  std::vector<std::size_t> basic;
  basic.reserve(rows);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t e : eta) basic.push_back(layout.flow_var(e, s));
  }
  for (std::size_t e : eta) basic.push_back(layout.slack_var(e));
  for (std::size_t e : eta_bar) basic.push_back(layout.slack_var(e));

  std::vector<std::size_t> nonbasic;
  nonbasic.reserve(cols);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t e : eta_bar) nonbasic.push_back(layout.flow_var(e, s));
  }
  nonbasic.push_back(layout.lambda_var());

  Matrix body(rows, cols);
  std::vector<double> rhs(rows, 0.0);
  // F_eta rows: I (x) M and vec(G).
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < nr; ++i) {
      const std::size_t r = s * nr + i;
      for (std::size_t j = 0; j < nb; ++j) body(r, s * nb + j) = mcoef(i, j);
      body(r, lambda_col) = gcoef(i, s);
    }
  }
  // slack_eta rows: -1^T (x) M and -G 1.
  for (std::size_t i = 0; i < nr; ++i) {
    const std::size_t r = n * nr + i;
    double g_sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t j = 0; j < nb; ++j) body(r, s * nb + j) = -mcoef(i, j);
      g_sum += gcoef(i, s);
    }
    body(r, lambda_col) = -g_sum;
    rhs[r] = capacities[eta[i]];
  }
  // slack_etabar rows: 1^T (x) I.
  for (std::size_t j = 0; j < nb; ++j) {
    const std::size_t r = n * nr + nr + j;
    for (std::size_t s = 0; s < n; ++s) body(r, s * nb + j) = 1.0;
    rhs[r] = capacities[eta_bar[j]];
  }
  std::vector<double> cost(cols, 0.0);
  cost[lambda_col] = -1.0;

  std::vector<std::size_t> slacks(m);
  for (std::size_t e = 0; e < m; ++e) slacks[e] = layout.slack_var(e);

  ThroughputTableau out;
  out.tableau = lp::SimplexTableau(std::move(basic), std::move(nonbasic),
                                   std::move(body), std::move(rhs), std::move(cost),
                                   0.0, std::move(slacks));
  out.layout = layout;
  out.kept_rows = reduced.kept_rows;
  out.eta = std::move(eta);
  return out;
}

namespace {

void RequireOptimal(const lp::SolveOutcome& outcome, const char* what) {
  switch (outcome.status) {
    case lp::SolveStatus::kOptimal:
      return;
    case lp::SolveStatus::kUnbounded:
      throw Error(ErrorCode::kUnbounded, std::string(what) + " is unbounded");
    case lp::SolveStatus::kInfeasible:
      throw Error(ErrorCode::kInfeasibleSystem, std::string(what) + " is infeasible");
    case lp::SolveStatus::kIterationLimit:
      throw Error(ErrorCode::kIterationLimit,
                  std::string(what) + " hit the pivot limit");
  }
}

}  // namespace

ThroughputSolution SolveThroughput(const Network& net, const DemandMatrix& demands) {
  const std::vector<double> b = net.Capacities();
  return SolveThroughput(net, demands, b);
}

ThroughputSolution SolveThroughput(const Network& net, const DemandMatrix& demands,
                                   std::span<const double> capacities) {
  ThroughputTableau built = BuildThroughputTableau(net, demands, capacities);
  const std::size_t limit = lp::DefaultPivotLimit(built.tableau);
  lp::SolveOutcome outcome = lp::PrimalSimplex(std::move(built.tableau), limit);
  RequireOptimal(outcome, "throughput LP");
  ThroughputSolution sol;
  sol.layout = built.layout;
  sol.lambda_star = std::max(0.0, outcome.tableau.Value(sol.layout.lambda_var()));
  sol.flows = ExtractFlows(outcome.tableau, sol.layout);
  sol.tableau = std::move(outcome.tableau);
  sol.pivot_count = outcome.pivot_count;
  return sol;
}

FlowMatrix ExtractFlows(const lp::SimplexTableau& tableau,
                        const ThroughputLayout& layout) {
  FlowMatrix f(layout.num_edges(), layout.num_vertices());
  for (std::size_t s = 0; s < layout.num_vertices(); ++s) {
    for (std::size_t e = 0; e < layout.num_edges(); ++e) {
      // Round-off can leave basic values at -1e-17 or so.
      f(e, s) = std::max(0.0, tableau.Value(layout.flow_var(e, s)));
    }
  }
  return f;
}

std::vector<double> EdgeLoads(const FlowMatrix& flows) {
  std::vector<double> loads(flows.rows(), 0.0);
  for (std::size_t e = 0; e < flows.rows(); ++e) {
    for (double v : flows.row(e)) loads[e] += v;
  }
  return loads;
}

LoadBalanceSolution LoadBalanceFromThroughput(const ThroughputSolution& sol) {
  if (!(sol.lambda_star > kTolerance)) {
    throw Error(ErrorCode::kZeroThroughput, "load balance needs lambda* > 0");
  }
  LoadBalanceSolution out;
  out.theta_star = 1.0 / sol.lambda_star;
  out.flows = sol.flows;
  for (std::size_t e = 0; e < out.flows.rows(); ++e) {
    for (double& v : out.flows.row(e)) v /= sol.lambda_star;
  }
  return out;
}

void LatencyConfig::Validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must lie in (0, 1]");
  }
  if (!(alpha_c > 0.0) || !std::isfinite(alpha_c)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha_c must be > 0");
  }
}

double EvalLatency(std::span<const double> edge_flows, const Network& net,
                   const LatencyConfig& config) {
  if (edge_flows.size() != net.num_edges()) {
    throw Error(ErrorCode::kDimensionMismatch, "one flow value per edge expected");
  }
  double total = 0.0;
  for (std::size_t e = 0; e < edge_flows.size(); ++e) {
    const double f = edge_flows[e];
    const double c = net.edge(e).delay;
    const double b = net.edge(e).capacity;
    if (!(f >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "edge flows must be >= 0");
    if (config.kind != LatencyKind::kLinear && f >= b) {
      throw Error(ErrorCode::kSaturatedEdge,
                  "edge " + std::to_string(e) + " carries flow at or above capacity");
    }
    switch (config.kind) {
      case LatencyKind::kLinear:
        total += c * f;
        break;
      case LatencyKind::kInverse:
        total += config.alpha_c * c * f / (1.0 - f / b);
        break;
      case LatencyKind::kLog:
        total += c * (1.0 - std::log(1.0 - f / b));
        break;
    }
  }
  return total;
}

MinDelayLP SolveMinDelay(const Network& net, const DemandMatrix& demands,
                         std::span<const double> capacities, double demand_scale,
                         std::span<const double> delays) {
  if (delays.size() != net.num_edges()) {
    throw Error(ErrorCode::kDimensionMismatch, "one delay per edge expected");
  }
  if (!(demand_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "demand scale must be > 0");
  }
  ThroughputSolution tp = SolveThroughput(net, demands, capacities);
  if (tp.lambda_star < demand_scale - kTolerance * std::max(1.0, demand_scale)) {
    throw Error(ErrorCode::kInfeasibleSystem,
                "demand scale " + std::to_string(demand_scale) +
                    " exceeds the throughput " + std::to_string(tp.lambda_star));
  }
  MinDelayLP out;
  out.layout = tp.layout;
  out.throughput = tp.lambda_star;
  out.pivot_count = tp.pivot_count;

  // Pin lambda: lambda <= scale is re-optimized by the dual simplex (the
  // objective still maximizes lambda), after which its slack is zero.
  std::vector<double> cut(tp.tableau.num_variables(), 0.0);
  cut[tp.layout.lambda_var()] = 1.0;
  lp::SimplexTableau t = std::move(tp.tableau);
  const std::size_t cut_id = t.AppendCut(cut, demand_scale);
  const std::size_t cut_slack = t.SlackOf(cut_id);
  const std::size_t dual_limit = lp::DefaultPivotLimit(t);
  lp::SolveOutcome pinned = lp::DualSimplex(std::move(t), dual_limit);
  RequireOptimal(pinned, "demand pinning LP");
  out.pivot_count += pinned.pivot_count;
  t = std::move(pinned.tableau);
  t.EliminateVariable(cut_slack, 1e-7 * std::max(1.0, demand_scale));

  std::vector<double> cost(t.num_variables(), 0.0);
  for (std::size_t s = 0; s < out.layout.num_vertices(); ++s) {
    for (std::size_t e = 0; e < out.layout.num_edges(); ++e) {
      cost[out.layout.flow_var(e, s)] = delays[e];
    }
  }
  t.SetObjective(cost);
  const std::size_t primal_limit = lp::DefaultPivotLimit(t);
  lp::SolveOutcome solved = lp::PrimalSimplex(std::move(t), primal_limit);
  RequireOptimal(solved, "min-delay LP");
  out.pivot_count += solved.pivot_count;
  out.tableau = std::move(solved.tableau);
  return out;
}

LatencySolution SolveLatencyLinear(const Network& net, const DemandMatrix& demands,
                                   const LatencyConfig& config, double lambda_max) {
  config.Validate();
  if (config.kind != LatencyKind::kLinear) {
    throw Error(ErrorCode::kInvalidArgument,
                "only linear latency is solved as an optimization problem");
  }
  const double scale = config.beta * lambda_max;
  const double normalization = scale * demands.Total();
  if (!(normalization > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "beta * lambda_max * total demand must be positive");
  }
  const std::vector<double> b = net.Capacities();
  const std::vector<double> c = net.Delays();
  MinDelayLP lp = SolveMinDelay(net, demands, b, scale, c);
  LatencySolution out;
  out.total_delay = lp.tableau.objective();
  out.normalization = normalization;
  out.latency = out.total_delay / normalization;
  out.flows = ExtractFlows(lp.tableau, lp.layout);
  out.tableau = std::move(lp.tableau);
  out.layout = lp.layout;
  out.pivot_count = lp.pivot_count;
  return out;
}

}  // namespace robustflow::flow
