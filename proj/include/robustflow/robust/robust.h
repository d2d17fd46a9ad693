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

// Worst case of a flow LP over all failure scenarios that delete exactly q
// failure units (single edges by default). Scenarios are visited as a
// depth-first tree: a child deletes one more unit than its parent, so its LP
// differs only in right-hand sides and is re-optimized from the parent's
// optimal tableau by the dual simplex.

#ifndef ROBUSTFLOW_ROBUST_ROBUST_H_
#define ROBUSTFLOW_ROBUST_ROBUST_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "robustflow/common.h"
#include "robustflow/flow/flow_lp.h"
#include "robustflow/lp/simplex.h"
#include "robustflow/network/network.h"

namespace robustflow::robust {

struct FailureScenario {
  std::vector<std::size_t> deleted_edges;  // sorted, distinct

  friend auto operator<=>(const FailureScenario&, const FailureScenario&) = default;
  friend bool operator==(const FailureScenario&, const FailureScenario&) = default;
};

// C(n, k), saturating at UINT64_MAX.
std::uint64_t BinomialCoefficient(std::uint64_t n, std::uint64_t k);

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> Combinations(std::size_t n, std::size_t k);

// All C(m, q) single-edge scenarios in lexicographic order.
// Throws kInvalidArgument if q > m.
std::vector<FailureScenario> EnumerateScenarios(std::size_t m, std::size_t q);

struct RobustOptions {
  std::size_t q = 1;
  std::size_t workers = 1;
  // Exhaustive enumeration refuses more scenarios than this unless
  // allow_large is set.
  std::uint64_t max_scenarios = 1'000'000;
  bool allow_large = false;
  bool keep_per_scenario = true;
  // Failure units deleted together, e.g. both directions of a link. Empty
  // means every edge is its own unit. Units must be disjoint.
  std::vector<std::vector<std::size_t>> failure_groups;
};

// max_scenarios from the ROBUSTFLOW_MAX_SCENARIOS environment variable, or
// `fallback` when it is unset or malformed.
std::uint64_t MaxScenariosFromEnv(std::uint64_t fallback);

struct ScenarioValue {
  FailureScenario scenario;
  double value = 0.0;
  std::size_t pivots = 0;  // dual simplex pivots at the scenario's own node
};

struct RobustReport {
  double worst_value = 0.0;
  FailureScenario worst_scenario;
  std::vector<ScenarioValue> per_scenario;  // lexicographic; empty unless kept
  std::size_t pivots_total = 0;             // including the nominal solve
  std::size_t scenarios_evaluated = 0;
};

enum class RobustObjective { kThroughput, kMinDelay };

// A finished evaluation together with what is needed for subgradients.
struct RobustEvaluation {
  RobustObjective objective = RobustObjective::kThroughput;
  RobustReport report;
  std::optional<lp::SimplexTableau> worst_tableau;
  std::vector<double> capacities;
  // The reported value is value_scale times the LP objective of the worst
  // scenario's tableau for kMinDelay; for kThroughput the LP objective is
  // -lambda and value_scale is 1.
  double value_scale = 1.0;
};

// Thrown when deleting a scenario's edges makes the flow system infeasible.
// Lists every such scenario in lexicographic order.
class ScenarioInfeasibleError : public Error {
 public:
  explicit ScenarioInfeasibleError(std::vector<FailureScenario> scenarios);
  const FailureScenario& scenario() const { return scenarios_.front(); }
  const std::vector<FailureScenario>& scenarios() const { return scenarios_; }

 private:
  std::vector<FailureScenario> scenarios_;
};

// min over scenarios of the throughput lambda*.
RobustEvaluation EvaluateRobustThroughput(const network::Network& net,
                                          const network::DemandMatrix& demands,
                                          std::span<const double> capacities,
                                          const RobustOptions& options);
RobustReport RobustThroughput(const network::Network& net,
                              const network::DemandMatrix& demands, std::size_t q);

// max over scenarios of  min sum_e delay_e (F 1)_e  s.t.  F 1 <= capacities
// minus deleted, N F = -demand_scale L_D, divided by `normalization`.
// Throws ScenarioInfeasibleError if some scenario's flow system is
// infeasible.
RobustEvaluation EvaluateRobustMinDelay(const network::Network& net,
                                        const network::DemandMatrix& demands,
                                        std::span<const double> capacities,
                                        double demand_scale, double normalization,
                                        const RobustOptions& options);

// Robust average latency with linear delays: demand scale beta * lambda_max
// and normalization beta * lambda_max * 1^T D 1, lambda_max the nominal
// throughput at the network's capacities.
RobustEvaluation EvaluateRobustLatencyLinear(const network::Network& net,
                                             const network::DemandMatrix& demands,
                                             const flow::LatencyConfig& config,
                                             const RobustOptions& options);
RobustReport RobustLatencyLinear(const network::Network& net,
                                 const network::DemandMatrix& demands, std::size_t q,
                                 const flow::LatencyConfig& config);

// Subgradient w.r.t. the capacity vector of the min-form robust value
// (-lambda for throughput, the reported latency for kMinDelay), read from
// the worst scenario's tableau. Entries of deleted edges are 0.
// Throws kNoTableau if the tableau was not retained.
std::vector<double> WorstScenarioSubgradient(const RobustEvaluation& evaluation);

}  // namespace robustflow::robust

#endif  // ROBUSTFLOW_ROBUST_ROBUST_H_
