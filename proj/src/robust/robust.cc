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

#include "robustflow/robust/robust.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>

namespace robustflow::robust {
namespace {

constexpr double kTieTolerance = 1e-9;

std::string DescribeScenario(const FailureScenario& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.deleted_edges.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(s.deleted_edges[i]);
  }
  return out + "}";
}

// Advances `pick` to the next k-subset of {0..n-1}; false after the last.
bool NextCombination(std::vector<std::size_t>& pick, std::size_t n) {
  const std::size_t k = pick.size();
  std::size_t i = k;
  while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
  if (i == 0) return false;
  ++pick[i - 1];
  for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  return true;
}

std::vector<std::vector<std::size_t>> ResolveGroups(const RobustOptions& options,
                                                    std::size_t m) {
  if (options.failure_groups.empty()) {
    std::vector<std::vector<std::size_t>> groups(m);
    for (std::size_t e = 0; e < m; ++e) groups[e] = {e};
    return groups;
  }
  std::vector<bool> seen(m, false);
  std::vector<std::vector<std::size_t>> groups = options.failure_groups;
  for (auto& g : groups) {
    if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "empty failure group");
    std::sort(g.begin(), g.end());
    for (std::size_t e : g) {
      if (e >= m) throw Error(ErrorCode::kInvalidArgument, "failure group edge out of range");
      if (seen[e]) throw Error(ErrorCode::kInvalidArgument, "failure groups overlap");
      seen[e] = true;
    }
  }
  return groups;
}

enum class Direction { kMinimize, kMaximize };

// One exhaustive scenario tree over failure units.
class ScenarioTree {
 public:
  ScenarioTree(const lp::SimplexTableau& root,
               std::vector<std::vector<std::size_t>> groups,
               std::span<const double> capacities, std::size_t q,
               std::function<double(const lp::SimplexTableau&)> value)
      : root_(root),
        groups_(std::move(groups)),
        capacities_(capacities),
        q_(q),
        value_(std::move(value)) {}

  struct Result {
    std::vector<double> values;
    std::vector<std::size_t> pivots;
    std::vector<char> infeasible;
    std::size_t pivots_total = 0;
  };

  Result Run(std::size_t workers) const {
    const std::size_t g = groups_.size();
    const std::uint64_t count = BinomialCoefficient(g, q_);
    Result out;
    out.values.assign(count, 0.0);
    out.pivots.assign(count, 0);
    out.infeasible.assign(count, 0);
    if (q_ == 0) {
      out.values[0] = value_(root_);
      return out;
    }
    // First-level subtrees: unit f heads C(g - f - 1, q - 1) scenarios.
    const std::size_t firsts = g - q_ + 1;
    std::vector<std::size_t> offset(firsts + 1, 0);
    for (std::size_t f = 0; f < firsts; ++f) {
      offset[f + 1] = offset[f] + BinomialCoefficient(g - f - 1, q_ - 1);
    }
    workers = std::max<std::size_t>(1, std::min(workers, firsts));
    std::vector<std::size_t> pivots(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t w) {
      try {
        for (std::size_t f = w; f < firsts; f += workers) {
          std::size_t slot = offset[f];
          VisitChild(root_, f, 0, slot, out, pivots[w]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
      for (std::thread& t : threads) t.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (std::size_t p : pivots) out.pivots_total += p;
    return out;
  }

  // Tableau of a scenario, re-derived along its tree path.
  lp::SimplexTableau Replay(const std::vector<std::size_t>& units) const {
    lp::SimplexTableau t = root_;
    for (std::size_t u : units) {
      lp::SolveOutcome out = Delete(std::move(t), u);
      t = std::move(out.tableau);
    }
    return t;
  }

  FailureScenario ScenarioOf(const std::vector<std::size_t>& units) const {
    FailureScenario s;
    for (std::size_t u : units) {
      s.deleted_edges.insert(s.deleted_edges.end(), groups_[u].begin(), groups_[u].end());
    }
    std::sort(s.deleted_edges.begin(), s.deleted_edges.end());
    return s;
  }

  std::size_t num_units() const { return groups_.size(); }

 private:
  lp::SolveOutcome Delete(lp::SimplexTableau t, std::size_t unit) const {
    for (std::size_t e : groups_[unit]) t.ShiftConstraintRhs(e, capacities_[e]);
    const std::size_t limit = lp::DefaultPivotLimit(t);
    lp::SolveOutcome out = lp::DualSimplex(std::move(t), limit);
    if (out.status == lp::SolveStatus::kIterationLimit) {
      throw Error(ErrorCode::kIterationLimit, "scenario re-optimization hit the pivot limit");
    }
    return out;
  }

  void VisitChild(const lp::SimplexTableau& parent, std::size_t unit, std::size_t depth,
                  std::size_t& slot, Result& out, std::size_t& pivots) const {
    lp::SolveOutcome child = Delete(parent, unit);
    pivots += child.pivot_count;
    const bool infeasible = child.status == lp::SolveStatus::kInfeasible;
    if (depth + 1 == q_) {
      out.pivots[slot] = child.pivot_count;
      if (infeasible) {
        out.infeasible[slot] = 1;
      } else {
        out.values[slot] = value_(child.tableau);
      }
      ++slot;
      return;
    }
    const std::size_t remaining = q_ - depth - 1;
    if (infeasible) {
      // Deleting more capacity keeps the system infeasible.
      const std::uint64_t below = BinomialCoefficient(groups_.size() - unit - 1, remaining);
      for (std::uint64_t k = 0; k < below; ++k) out.infeasible[slot++] = 1;
      return;
    }
    for (std::size_t next = unit + 1; next + remaining <= groups_.size(); ++next) {
      VisitChild(child.tableau, next, depth + 1, slot, out, pivots);
    }
  }

  const lp::SimplexTableau& root_;
  std::vector<std::vector<std::size_t>> groups_;
  std::span<const double> capacities_;
  std::size_t q_;
  std::function<double(const lp::SimplexTableau&)> value_;
};

void CheckGate(std::uint64_t count, const RobustOptions& options) {
  if (count > options.max_scenarios && !options.allow_large) {
    throw Error(ErrorCode::kTooManyScenarios,
                std::to_string(count) + " scenarios exceed the limit of " +
                    std::to_string(options.max_scenarios));
  }
}

// Runs the tree and reduces it to the worst scenario, lexicographically
// first among ties.
RobustEvaluation Evaluate(const lp::SimplexTableau& root, std::size_t root_pivots,
                          std::span<const double> capacities,
                          const RobustOptions& options, Direction direction,
                          std::function<double(const lp::SimplexTableau&)> value,
                          std::vector<std::vector<std::size_t>> groups) {
  const ScenarioTree tree(root, std::move(groups), capacities, options.q, std::move(value));
  std::size_t workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const ScenarioTree::Result res = tree.Run(workers);

  RobustEvaluation ev;
  ev.capacities.assign(capacities.begin(), capacities.end());
  ev.report.pivots_total = root_pivots + res.pivots_total;
  ev.report.scenarios_evaluated = res.values.size();
  std::vector<std::size_t> pick(options.q);
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  std::vector<std::size_t> worst_pick;
  double worst = 0.0;
  std::vector<FailureScenario> infeasible;
  for (std::size_t slot = 0; slot < res.values.size(); ++slot) {
    if (res.infeasible[slot]) {
      infeasible.push_back(tree.ScenarioOf(pick));
      NextCombination(pick, tree.num_units());
      continue;
    }
    const double v = res.values[slot];
    const bool better = direction == Direction::kMinimize ? v < worst - kTieTolerance
                                                          : v > worst + kTieTolerance;
    if (worst_pick.empty() || better) {
      worst = v;
      worst_pick = pick;
    }
    if (options.keep_per_scenario) {
      ev.report.per_scenario.push_back({tree.ScenarioOf(pick), v, res.pivots[slot]});
    }
    NextCombination(pick, tree.num_units());
  }
  if (!infeasible.empty()) throw ScenarioInfeasibleError(std::move(infeasible));
  ev.report.worst_value = worst;
  ev.report.worst_scenario = tree.ScenarioOf(worst_pick);
  ev.worst_tableau = tree.Replay(worst_pick);
  return ev;
}

}  // namespace

namespace {

std::string DescribeAll(const std::vector<FailureScenario>& scenarios) {
  if (scenarios.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no infeasible scenario given");
  }
  std::string out = "deleting edges ";
  const std::size_t shown = std::min<std::size_t>(scenarios.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += " ";
    out += DescribeScenario(scenarios[i]);
  }
  if (shown < scenarios.size()) {
    out += " (and " + std::to_string(scenarios.size() - shown) + " more)";
  }
  return out + " leaves some demand unroutable";
}

}  // namespace

ScenarioInfeasibleError::ScenarioInfeasibleError(std::vector<FailureScenario> scenarios)
    : Error(ErrorCode::kScenarioInfeasible, DescribeAll(scenarios)),
      scenarios_(std::move(scenarios)) {}

std::uint64_t BinomialCoefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral; guard the multiplication.
    const std::uint64_t factor = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * factor / i;
  }
  return r;
}

std::vector<std::vector<std::size_t>> Combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  do {
    out.push_back(pick);
  } while (NextCombination(pick, n));
  return out;
}

std::vector<FailureScenario> EnumerateScenarios(std::size_t m, std::size_t q) {
  if (q > m) throw Error(ErrorCode::kInvalidArgument, "q exceeds the number of edges");
  std::vector<FailureScenario> out;
  for (auto& c : Combinations(m, q)) out.push_back({std::move(c)});
  return out;
}

std::uint64_t MaxScenariosFromEnv(std::uint64_t fallback) {
  const char* raw = std::getenv("ROBUSTFLOW_MAX_SCENARIOS");
  if (raw == nullptr) return fallback;
  const std::string_view text(raw);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return fallback;
  return value;
}

namespace {

void CheckCommon(const network::Network& net, std::span<const double> capacities,
                 const std::vector<std::vector<std::size_t>>& groups,
                 const RobustOptions& options) {
  if (capacities.size() != net.num_edges()) {
    throw Error(ErrorCode::kDimensionMismatch, "one capacity per edge expected");
  }
  if (options.q > groups.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "q = " + std::to_string(options.q) + " exceeds the " +
                    std::to_string(groups.size()) + " failure units");
  }
  CheckGate(BinomialCoefficient(groups.size(), options.q), options);
}

}  // namespace

RobustEvaluation EvaluateRobustThroughput(const network::Network& net,
                                          const network::DemandMatrix& demands,
                                          std::span<const double> capacities,
                                          const RobustOptions& options) {
  auto groups = ResolveGroups(options, net.num_edges());
  CheckCommon(net, capacities, groups, options);
  const flow::ThroughputSolution nominal = flow::SolveThroughput(net, demands, capacities);
  RobustEvaluation ev = Evaluate(
      nominal.tableau, nominal.pivot_count, capacities, options, Direction::kMinimize,
      [](const lp::SimplexTableau& t) { return std::max(0.0, -t.objective()); }, std::move(groups));
  ev.objective = RobustObjective::kThroughput;
  ev.value_scale = 1.0;
  return ev;
}

RobustReport RobustThroughput(const network::Network& net,
                              const network::DemandMatrix& demands, std::size_t q) {
  RobustOptions options;
  options.q = q;
  const std::vector<double> b = net.Capacities();
  return EvaluateRobustThroughput(net, demands, b, options).report;
}

RobustEvaluation EvaluateRobustMinDelay(const network::Network& net,
                                        const network::DemandMatrix& demands,
                                        std::span<const double> capacities,
                                        double demand_scale, double normalization,
                                        const RobustOptions& options) {
  if (!(normalization > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "normalization must be > 0");
  }
  auto groups = ResolveGroups(options, net.num_edges());
  CheckCommon(net, capacities, groups, options);
  const std::vector<double> delays = net.Delays();
  const flow::MinDelayLP nominal =
      flow::SolveMinDelay(net, demands, capacities, demand_scale, delays);
  const double scale = 1.0 / normalization;
  RobustEvaluation ev = Evaluate(
      nominal.tableau, nominal.pivot_count, capacities, options, Direction::kMaximize,
      [scale](const lp::SimplexTableau& t) { return t.objective() * scale; },
      std::move(groups));
  ev.objective = RobustObjective::kMinDelay;
  ev.value_scale = scale;
  return ev;
}

RobustEvaluation EvaluateRobustLatencyLinear(const network::Network& net,
                                             const network::DemandMatrix& demands,
                                             const flow::LatencyConfig& config,
                                             const RobustOptions& options) {
  config.Validate();
  if (config.kind != flow::LatencyKind::kLinear) {
    throw Error(ErrorCode::kInvalidArgument, "robust latency needs linear delays");
  }
  const double lambda_max = flow::SolveThroughput(net, demands).lambda_star;
  const double scale = config.beta * lambda_max;
  const std::vector<double> b = net.Capacities();
  return EvaluateRobustMinDelay(net, demands, b, scale, scale * demands.Total(), options);
}

RobustReport RobustLatencyLinear(const network::Network& net,
                                 const network::DemandMatrix& demands, std::size_t q,
                                 const flow::LatencyConfig& config) {
  RobustOptions options;
  options.q = q;
  return EvaluateRobustLatencyLinear(net, demands, config, options).report;
}

std::vector<double> WorstScenarioSubgradient(const RobustEvaluation& evaluation) {
  if (!evaluation.worst_tableau) {
    throw Error(ErrorCode::kNoTableau, "the worst scenario's tableau was not retained");
  }
  const std::size_t m = evaluation.capacities.size();
  std::vector<double> g(m, 0.0);
  const auto& deleted = evaluation.report.worst_scenario.deleted_edges;
  for (std::size_t e = 0; e < m; ++e) {
    if (std::binary_search(deleted.begin(), deleted.end(), e)) continue;
    g[e] = lp::RhsSensitivity(*evaluation.worst_tableau, e) * evaluation.value_scale;
  }
  return g;
}

}  // namespace robustflow::robust
