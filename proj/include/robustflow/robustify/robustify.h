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

// Budget allocation against edge failures: choose capacity increments
// delta_b >= 0 with sum(delta_b) <= B that optimize a robust flow value.
// Both robust values are convex piecewise-affine functions of the
// capacities in min-form, so the outer problem is a convex minimization over
// the budget simplex, solved by projected subgradient steps or by a cutting
// plane method whose master LP is re-optimized by the dual simplex after
// each new cut.

#ifndef ROBUSTFLOW_ROBUSTIFY_ROBUSTIFY_H_
#define ROBUSTFLOW_ROBUSTIFY_ROBUSTIFY_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "robustflow/lp/simplex.h"
#include "robustflow/network/network.h"
#include "robustflow/robust/robust.h"

namespace robustflow::robustify {

struct BudgetAllocation {
  std::vector<double> delta_b;
};

// Euclidean projection onto {x >= 0, sum(x) <= budget}.
// Throws kInvalidArgument if budget < 0.
BudgetAllocation ProjectBudgetSimplex(std::span<const double> v, double budget);

struct OracleValue {
  double value = 0.0;
  std::vector<double> subgradient;
};

// A convex function on the budget simplex with one subgradient per point.
using ConvexOracle = std::function<OracleValue(std::span<const double>)>;

enum class StopReason { kConverged, kStepsCompleted, kIterationLimit };
std::string_view StopReasonName(StopReason reason);

struct IterationRecord {
  std::size_t iteration = 0;
  std::vector<double> point;
  double value = 0.0;
  double best_value = 0.0;
  std::optional<double> lower_bound;  // cutting plane only
};

// One linearization f_t + <g_t, x - x_t>.
struct Cut {
  double value = 0.0;
  std::vector<double> subgradient;
  std::vector<double> point;

  double Evaluate(std::span<const double> x) const;
};

// Master problem of the cutting plane method. Its variables are
// phi_plus (0), x (1..m), the budget slack (m + 1) and one slack per cut;
// phi = phi_plus + phi_offset.
struct CutModel {
  std::vector<Cut> cuts;
  lp::SimplexTableau master_tableau;
  double phi_offset = 0.0;

  // max_t of the cuts at x.
  double Evaluate(std::span<const double> x) const;
};

struct SubgradientOptions {
  std::size_t steps = 1000;
  double step_scale = 0.0;  // gamma_0; 0 selects the budget
  double tol = 1e-7;        // stop when a step no longer moves the iterate
};

struct CuttingPlaneOptions {
  std::size_t max_iters = 200;
  double tol = 1e-7;
};

struct MinimizeResult {
  BudgetAllocation best;
  double best_value = 0.0;
  std::vector<IterationRecord> history;
  StopReason stop = StopReason::kConverged;
  std::optional<CutModel> model;  // cutting plane only
};

// x_{t+1} = P(x_t - gamma_t g_t) with gamma_t = gamma_0 / sqrt(t + 1),
// starting at x_0 = 0; returns the best iterate.
MinimizeResult MinimizeSubgradient(const ConvexOracle& f, std::size_t dim, double budget,
                                   const SubgradientOptions& options);

// Kelley's cutting plane method from x_0 = 0. The first master problem is
// solved in closed form (full budget on the most negative subgradient
// entry). Stops when ||x_{t+1} - x_t||_inf <= tol or when the best value is
// within tol of the model's lower bound; kIterationLimit after max_iters
// oracle calls.
MinimizeResult MinimizeCuttingPlane(const ConvexOracle& f, std::size_t dim, double budget,
                                    const CuttingPlaneOptions& options);

// -(robust throughput) at capacities b0 + x.
ConvexOracle RobustThroughputOracle(const network::Network& net,
                                    const network::DemandMatrix& demands,
                                    const robust::RobustOptions& options);

// Robust minimal total delay at capacities b0 + x, with balance
// N F = -demand_scale L_D, divided by `normalization`.
ConvexOracle RobustMinDelayOracle(const network::Network& net,
                                  const network::DemandMatrix& demands,
                                  double demand_scale, double normalization,
                                  const robust::RobustOptions& options);

enum class Method { kSubgradient, kCuttingPlane };

struct RobustifyOptions {
  Method method = Method::kCuttingPlane;
  robust::RobustOptions robust;
  SubgradientOptions subgradient;
  CuttingPlaneOptions cutting_plane;
};

struct RobustifyResult {
  BudgetAllocation allocation;
  // Robust throughput (maximized) or robust total delay (minimized) at the
  // returned allocation, in natural sign.
  double value = 0.0;
  MinimizeResult minimization;
};

RobustifyResult RobustifyThroughput(const network::Network& net,
                                    const network::DemandMatrix& demands, double budget,
                                    const RobustifyOptions& options);
RobustifyResult RobustifyThroughputSubgradient(const network::Network& net,
                                               const network::DemandMatrix& demands,
                                               std::size_t q, double budget,
                                               const SubgradientOptions& options = {});
RobustifyResult RobustifyThroughputCuttingPlane(const network::Network& net,
                                                const network::DemandMatrix& demands,
                                                std::size_t q, double budget,
                                                const CuttingPlaneOptions& options = {});

// Minimizes the worst-case total delay  sum_e c_e (F 1)_e  over the budget,
// with balance N F = -demand_scale L_D (1 reproduces the unscaled demands).
// Throws robust::ScenarioInfeasibleError listing every scenario that is
// infeasible at delta_b = 0.
RobustifyResult RobustifyLatencyLinear(const network::Network& net,
                                       const network::DemandMatrix& demands,
                                       double budget, const RobustifyOptions& options,
                                       double demand_scale = 1.0);

}  // namespace robustflow::robustify

#endif  // ROBUSTFLOW_ROBUSTIFY_ROBUSTIFY_H_
