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

#include "robustflow/robustify/robustify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace robustflow::robustify {

BudgetAllocation ProjectBudgetSimplex(std::span<const double> v, double budget) {
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorCode::kInvalidArgument, "budget must be >= 0");
  }
  BudgetAllocation out;
  out.delta_b.resize(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.delta_b[i] = std::max(0.0, v[i]);
    sum += out.delta_b[i];
  }
  // Points already on the face may overshoot by a rounding error.
  if (sum <= budget * (1.0 + 1e-14)) return out;
  if (budget == 0.0) {
    std::fill(out.delta_b.begin(), out.delta_b.end(), 0.0);
    return out;
  }
  // The budget row is active: x = max(v - theta, 0) with sum(x) = budget.
  std::vector<double> u = out.delta_b;
  std::sort(u.begin(), u.end(), std::greater<>());
  double prefix = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    prefix += u[j];
    const double candidate = (prefix - budget) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  for (double& x : out.delta_b) x = std::max(0.0, x - theta);
  return out;
}

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged: return "converged";
    case StopReason::kStepsCompleted: return "steps_completed";
    case StopReason::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

double Cut::Evaluate(std::span<const double> x) const {
  double v = value;
  for (std::size_t i = 0; i < x.size(); ++i) v += subgradient[i] * (x[i] - point[i]);
  return v;
}

double CutModel::Evaluate(std::span<const double> x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Cut& c : cuts) best = std::max(best, c.Evaluate(x));
  return best;
}

namespace {

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

OracleValue Call(const ConvexOracle& f, std::span<const double> x, std::size_t dim) {
  OracleValue v = f(x);
  if (v.subgradient.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "oracle subgradient has wrong length");
  }
  return v;
}

}  // namespace

MinimizeResult MinimizeSubgradient(const ConvexOracle& f, std::size_t dim, double budget,
                                   const SubgradientOptions& options) {
  if (!(budget >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "budget must be >= 0");
  const double gamma0 = options.step_scale > 0.0 ? options.step_scale : budget;
  MinimizeResult res;
  res.stop = StopReason::kStepsCompleted;
  std::vector<double> x(dim, 0.0);
  const std::size_t steps = std::max<std::size_t>(options.steps, 1);
  for (std::size_t t = 0; t < steps; ++t) {
    const OracleValue ev = Call(f, x, dim);
    if (t == 0 || ev.value < res.best_value) {
      res.best_value = ev.value;
      res.best.delta_b = x;
    }
    res.history.push_back({t, x, ev.value, res.best_value, std::nullopt});
    if (t + 1 == steps) break;
    const double gamma = gamma0 / std::sqrt(static_cast<double>(t + 1));
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) y[i] = x[i] - gamma * ev.subgradient[i];
    std::vector<double> next = ProjectBudgetSimplex(y, budget).delta_b;
    // A projected step that does not move certifies a minimizer.
    if (MaxAbsDiff(next, x) <= options.tol) {
      res.stop = StopReason::kConverged;
      break;
    }
    x = std::move(next);
  }
  return res;
}

MinimizeResult MinimizeCuttingPlane(const ConvexOracle& f, std::size_t dim, double budget,
                                    const CuttingPlaneOptions& options) {
  if (!(budget >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "budget must be >= 0");
  MinimizeResult res;
  CutModel model;
  std::vector<double> x(dim, 0.0);

  // Master: min phi_plus s.t. sum(x) + s = budget, one row per cut.
  const std::size_t phi = 0, budget_slack = dim + 1;
  {
    std::vector<std::size_t> nonbasic(dim + 1);
    std::iota(nonbasic.begin(), nonbasic.end(), 0);
    Matrix body(1, dim + 1, 1.0);
    body(0, phi) = 0.0;
    std::vector<double> cost(dim + 1, 0.0);
    cost[phi] = 1.0;
    model.master_tableau = lp::SimplexTableau({budget_slack}, std::move(nonbasic),
                                              std::move(body), {budget}, std::move(cost),
                                              0.0, {budget_slack});
  }

  std::vector<double> next;
  const std::size_t max_iters = std::max<std::size_t>(options.max_iters, 1);
  for (std::size_t t = 0;; ++t) {
    const OracleValue ev = Call(f, x, dim);
    if (t == 0 || ev.value < res.best_value) {
      res.best_value = ev.value;
      res.best.delta_b = x;
    }
    Cut cut{ev.value, ev.subgradient, x};

    if (t == 0) {
      // Minimize the first cut over the simplex in closed form; its minimum
      // bounds the objective from below, so phi >= that bound - 1 is
      // never binding.
      next.assign(dim, 0.0);
      std::size_t k = dim;
      for (std::size_t i = 0; i < dim; ++i) {
        if (cut.subgradient[i] < 0.0 && (k == dim || cut.subgradient[i] < cut.subgradient[k])) {
          k = i;
        }
      }
      if (k < dim) next[k] = budget;
      model.phi_offset = cut.Evaluate(next) - 1.0;
    }

    // <g, x> - phi_plus <= <g, x_t> - f_t + offset.
    std::vector<double> coeffs(model.master_tableau.num_variables(), 0.0);
    coeffs[phi] = -1.0;
    double b0 = model.phi_offset - cut.value;
    for (std::size_t i = 0; i < dim; ++i) {
      coeffs[1 + i] = cut.subgradient[i];
      b0 += cut.subgradient[i] * cut.point[i];
    }
    model.master_tableau.AppendCut(coeffs, b0);
    model.cuts.push_back(std::move(cut));
    const std::size_t limit = lp::DefaultPivotLimit(model.master_tableau);
    lp::SolveOutcome out = lp::DualSimplex(std::move(model.master_tableau), limit);
    if (out.status != lp::SolveStatus::kOptimal) {
      throw Error(ErrorCode::kIterationLimit,
                  std::string("cutting plane master LP: ") +
                      std::string(lp::SolveStatusName(out.status)));
    }
    model.master_tableau = std::move(out.tableau);
    const double lower = model.master_tableau.objective() + model.phi_offset;
    if (t > 0) {
      std::vector<double> raw(dim);
      for (std::size_t i = 0; i < dim; ++i) raw[i] = model.master_tableau.Value(1 + i);
      next = ProjectBudgetSimplex(raw, budget).delta_b;  // strips round-off
    }
    res.history.push_back({t, x, ev.value, res.best_value, lower});

    if (MaxAbsDiff(next, x) <= options.tol || res.best_value - lower <= options.tol) {
      res.stop = StopReason::kConverged;
      break;
    }
    if (t + 1 >= max_iters) {
      res.stop = StopReason::kIterationLimit;
      break;
    }
    x = next;
  }
  res.model = std::move(model);
  return res;
}

ConvexOracle RobustThroughputOracle(const network::Network& net,
                                    const network::DemandMatrix& demands,
                                    const robust::RobustOptions& options) {
  robust::RobustOptions opts = options;
  opts.keep_per_scenario = false;
  return [net, demands, opts](std::span<const double> x) {
    std::vector<double> b = net.Capacities();
    for (std::size_t e = 0; e < b.size(); ++e) b[e] += x[e];
    const robust::RobustEvaluation ev = robust::EvaluateRobustThroughput(net, demands, b, opts);
    return OracleValue{-ev.report.worst_value, robust::WorstScenarioSubgradient(ev)};
  };
}

ConvexOracle RobustMinDelayOracle(const network::Network& net,
                                  const network::DemandMatrix& demands,
                                  double demand_scale, double normalization,
                                  const robust::RobustOptions& options) {
  robust::RobustOptions opts = options;
  opts.keep_per_scenario = false;
  return [net, demands, demand_scale, normalization, opts](std::span<const double> x) {
    std::vector<double> b = net.Capacities();
    for (std::size_t e = 0; e < b.size(); ++e) b[e] += x[e];
    const robust::RobustEvaluation ev = robust::EvaluateRobustMinDelay(
        net, demands, b, demand_scale, normalization, opts);
    return OracleValue{ev.report.worst_value, robust::WorstScenarioSubgradient(ev)};
  };
}

namespace {

MinimizeResult RunMethod(const ConvexOracle& f, std::size_t dim, double budget,
                         const RobustifyOptions& options) {
  if (options.method == Method::kSubgradient) {
    return MinimizeSubgradient(f, dim, budget, options.subgradient);
  }
  return MinimizeCuttingPlane(f, dim, budget, options.cutting_plane);
}

}  // namespace

RobustifyResult RobustifyThroughput(const network::Network& net,
                                    const network::DemandMatrix& demands, double budget,
                                    const RobustifyOptions& options) {
  const ConvexOracle f = RobustThroughputOracle(net, demands, options.robust);
  RobustifyResult out;
  out.minimization = RunMethod(f, net.num_edges(), budget, options);
  out.allocation = out.minimization.best;
  out.value = -out.minimization.best_value;
  return out;
}

RobustifyResult RobustifyThroughputSubgradient(const network::Network& net,
                                               const network::DemandMatrix& demands,
                                               std::size_t q, double budget,
                                               const SubgradientOptions& options) {
  RobustifyOptions opts;
  opts.method = Method::kSubgradient;
  opts.robust.q = q;
  opts.subgradient = options;
  return RobustifyThroughput(net, demands, budget, opts);
}

RobustifyResult RobustifyThroughputCuttingPlane(const network::Network& net,
                                                const network::DemandMatrix& demands,
                                                std::size_t q, double budget,
                                                const CuttingPlaneOptions& options) {
  RobustifyOptions opts;
  opts.method = Method::kCuttingPlane;
  opts.robust.q = q;
  opts.cutting_plane = options;
  return RobustifyThroughput(net, demands, budget, opts);
}

RobustifyResult RobustifyLatencyLinear(const network::Network& net,
                                       const network::DemandMatrix& demands,
                                       double budget, const RobustifyOptions& options,
                                       double demand_scale) {
  const ConvexOracle f =
      RobustMinDelayOracle(net, demands, demand_scale, 1.0, options.robust);
  RobustifyResult out;
  out.minimization = RunMethod(f, net.num_edges(), budget, options);
  out.allocation = out.minimization.best;
  out.value = out.minimization.best_value;
  return out;
}

}  // namespace robustflow::robustify
