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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "robustflow/flow/flow_lp.h"
#include "test_util.h"

namespace robustflow::flow {
namespace {

using network::DemandMatrix;
using network::Network;
using testing::DemandAB;
using testing::DemandC;
using testing::NetA;
using testing::NetB;
using testing::NetC;

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

// N F = -lambda L_D and F 1 <= b.
void CheckFeasibleFlow(const Network& net, const DemandMatrix& d, const FlowMatrix& f,
                       double lambda) {
  const Matrix n = network::IncidenceMatrix(net);
  const Matrix l = network::MakeDemandLaplacian(d);
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    for (std::size_t s = 0; s < net.num_vertices(); ++s) {
      double nf = 0.0;
      for (std::size_t e = 0; e < net.num_edges(); ++e) nf += n(i, e) * f(e, s);
      CHECK(std::abs(nf + lambda * l(i, s)) <= 1e-8);
    }
  }
  const std::vector<double> loads = EdgeLoads(f);
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    CHECK(loads[e] <= net.edge(e).capacity + 1e-8);
    for (std::size_t s = 0; s < net.num_vertices(); ++s) CHECK(f(e, s) >= -1e-9);
  }
}

TEST_CASE("layout numbering") {
  const ThroughputLayout layout(3, 4);
  CHECK(layout.flow_var(2, 1) == 6);
  CHECK(layout.slack_var(3) == 15);
  CHECK(layout.lambda_var() == 16);
  CHECK(layout.num_variables() == 17);
  const auto info = layout.Describe(6);
  CHECK(info.kind == ThroughputLayout::Kind::kFlow);
  CHECK(info.edge == 2);
  CHECK(info.source == 1);
  CHECK(layout.Describe(13).kind == ThroughputLayout::Kind::kSlack);
  CHECK(layout.Describe(16).kind == ThroughputLayout::Kind::kLambda);
}

TEST_CASE("Table 1 tableau for NET-B") {
  const ThroughputTableau t = BuildThroughputTableau(NetB(), DemandAB());
  CHECK(t.eta == std::vector<std::size_t>{0});
  // Basics f(0,0), f(0,1), slack_0; the only non-basic is lambda.
  CHECK(t.tableau.basic_vars() == std::vector<std::size_t>{0, 1, 2});
  CHECK(t.tableau.nonbasic_vars() == std::vector<std::size_t>{3});
  CHECK(t.tableau.rhs() == std::vector<double>{0.0, 0.0, 3.0});
  CHECK(t.tableau.cost_row() == std::vector<double>{-1.0});
  CHECK(t.tableau.PrimalFeasible());
  // Hand elimination with kept row 0 (-f = -4 lambda for source 0):
  // f(0,0) - 4 lambda = 0, f(0,1) = 0, slack + 4 lambda = 3.
  CHECK(t.tableau.body()(0, 0) == -4.0);
  CHECK(t.tableau.body()(1, 0) == 0.0);
  CHECK(t.tableau.body()(2, 0) == 4.0);
}

TEST_CASE("Table 1 tableau for NET-C") {
  const ThroughputTableau t = BuildThroughputTableau(NetC(), DemandC());
  CHECK(t.eta.size() == 2);
  CHECK(t.tableau.num_rows() == 3 * 2 + 3);
  CHECK(t.tableau.num_nonbasic() == 3 * 1 + 1);
  for (std::size_t r = 0; r < 6; ++r) CHECK(t.tableau.rhs()[r] == 0.0);
  for (std::size_t r = 6; r < 9; ++r) CHECK(t.tableau.rhs()[r] == 1.0);
  // Vertex: F = 0, slacks = b.
  const std::vector<double> x = t.tableau.Point();
  for (std::size_t v = 0; v < 9; ++v) CHECK(x[v] == 0.0);
  for (std::size_t e = 0; e < 3; ++e) CHECK(x[t.layout.slack_var(e)] == 1.0);
}

TEST_CASE("builder errors") {
  CHECK(CodeOf([] { BuildThroughputTableau(NetB(), DemandMatrix(2)); }) ==
        ErrorCode::kNoDemand);
  const Network split(4, {{0, 1, 1.0, 0.0}, {2, 3, 1.0, 0.0}});
  CHECK(CodeOf([&] { BuildThroughputTableau(split, testing::SinglePair(4, 0, 2, 1.0)); }) ==
        ErrorCode::kInfeasibleSystem);
  CHECK(CodeOf([] { BuildThroughputTableau(NetB(), DemandMatrix(3)); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("throughput examples") {
  const ThroughputSolution b = SolveThroughput(NetB(), DemandAB());
  CHECK(b.lambda_star == doctest::Approx(0.75).epsilon(1e-12));
  CheckFeasibleFlow(NetB(), DemandAB(), b.flows, b.lambda_star);
  const ThroughputSolution a = SolveThroughput(NetA(), DemandAB());
  CHECK(a.lambda_star == doctest::Approx(1.25).epsilon(1e-12));
  CheckFeasibleFlow(NetA(), DemandAB(), a.flows, a.lambda_star);
  const ThroughputSolution c = SolveThroughput(NetC(), DemandC());
  CHECK(c.lambda_star == doctest::Approx(1.0).epsilon(1e-12));
  CheckFeasibleFlow(NetC(), DemandC(), c.flows, c.lambda_star);
  CHECK(c.flows(0, 0) == doctest::Approx(1.0));
  CHECK(c.flows(1, 0) == doctest::Approx(1.0));
  CHECK(c.flows(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("load balance examples") {
  const LoadBalanceSolution a = LoadBalanceFromThroughput(SolveThroughput(NetA(), DemandAB()));
  CHECK(a.theta_star == doctest::Approx(0.8));
  const ThroughputSolution c = SolveThroughput(NetC(), DemandC());
  const LoadBalanceSolution lc = LoadBalanceFromThroughput(c);
  CHECK(lc.theta_star == doctest::Approx(1.0));
  CHECK(lc.flows == c.flows);
  const LoadBalanceSolution b = LoadBalanceFromThroughput(SolveThroughput(NetB(), DemandAB()));
  CHECK(b.theta_star == doctest::Approx(4.0 / 3.0));
  CHECK(b.flows(0, 0) == doctest::Approx(4.0));
  CHECK(b.flows(0, 0) / 3.0 == doctest::Approx(4.0 / 3.0));
  ThroughputSolution zero;
  CHECK(CodeOf([&] { LoadBalanceFromThroughput(zero); }) == ErrorCode::kZeroThroughput);
}

TEST_CASE("linear latency examples") {
  const LatencyConfig cfg;
  CHECK(cfg.beta == 0.9);
  const LatencySolution b = SolveLatencyLinear(NetB(2.0), DemandAB(), cfg, 0.75);
  CHECK(b.latency == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(EdgeLoads(b.flows)[0] == doctest::Approx(2.7));
  const LatencySolution zero = SolveLatencyLinear(NetC(), DemandC(), cfg, 1.0);
  CHECK(std::abs(zero.latency) < 1e-12);
  const LatencySolution c = SolveLatencyLinear(NetC(1, 10, 10), DemandC(), cfg, 1.0);
  CHECK(c.latency == doctest::Approx(17.0 / 1.8).epsilon(1e-12));
  CheckFeasibleFlow(NetC(), DemandC(), c.flows, 0.9);
  const std::vector<double> loads = EdgeLoads(c.flows);
  CHECK(loads[0] == doctest::Approx(1.0));
  CHECK(loads[1] == doctest::Approx(0.8));
  LatencyConfig inverse;
  inverse.kind = LatencyKind::kInverse;
  CHECK(CodeOf([&] { SolveLatencyLinear(NetB(), DemandAB(), inverse, 0.75); }) ==
        ErrorCode::kInvalidArgument);
  LatencyConfig bad;
  bad.beta = 1.5;
  CHECK(CodeOf([&] { SolveLatencyLinear(NetB(), DemandAB(), bad, 0.75); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("eval_latency examples") {
  const Network net(2, {{0, 1, 2.0, 1.0}});
  const std::vector<double> zero{0.0}, one{1.0}, full{2.0};
  LatencyConfig cfg;
  CHECK(EvalLatency(zero, net, cfg) == 0.0);
  cfg.kind = LatencyKind::kInverse;
  CHECK(EvalLatency(zero, net, cfg) == 0.0);
  cfg.alpha_c = 1.0;
  CHECK(EvalLatency(one, net, cfg) == doctest::Approx(2.0));
  CHECK(CodeOf([&] { EvalLatency(full, net, cfg); }) == ErrorCode::kSaturatedEdge);
  cfg.kind = LatencyKind::kLog;
  CHECK(EvalLatency(zero, net, cfg) == 1.0);
  CHECK(EvalLatency(one, net, cfg) == doctest::Approx(1.0 - std::log(0.5)));
  CHECK(EvalLatency(one, net, cfg) == doctest::Approx(1.6931).epsilon(1e-4));
  CHECK(CodeOf([&] { EvalLatency(full, net, cfg); }) == ErrorCode::kSaturatedEdge);
}

TEST_CASE("property: eval_latency monotone, inverse blows up near saturation") {
  const Network net(2, {{0, 1, 2.0, 1.5}});
  for (LatencyKind kind : {LatencyKind::kLinear, LatencyKind::kInverse, LatencyKind::kLog}) {
    LatencyConfig cfg;
    cfg.kind = kind;
    double prev = -1.0;
    for (int k = 0; k < 200; ++k) {
      const std::vector<double> f{2.0 * k / 200.0};
      const double v = EvalLatency(f, net, cfg);
      CHECK(v >= prev);
      prev = v;
    }
  }
  LatencyConfig cfg;
  cfg.kind = LatencyKind::kInverse;
  const std::vector<double> near{2.0 * (1.0 - 1e-12)};
  CHECK(EvalLatency(near, net, cfg) > 1e5);
}

TEST_CASE("property: throughput matches basis enumeration on tiny instances") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const Network net = testing::RandomNetwork(rng, n, n == 2 ? 2 : 1);
    if (net.num_edges() > 4) continue;
    const DemandMatrix d = testing::RandomDemands(rng, n, 1 + trial % 2);
    const ThroughputSolution sol = SolveThroughput(net, d);
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    const auto lp = testing::ThroughputStandardForm(net, d, net.Capacities());
    testing::ThroughputReducedRows(lp, n, &a, &b);
    const auto brute = testing::BruteForceStandardForm(lp.cost, a, b);
    REQUIRE(brute.has_value());
    CHECK(-sol.lambda_star == doctest::Approx(*brute).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("property: Lemma 1 product, scaling, feasibility, cold agreement") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const Network net = testing::RandomNetwork(rng, n, trial % 8);
    const DemandMatrix d = testing::RandomDemands(rng, n, 1 + trial % 5);
    const ThroughputSolution sol = SolveThroughput(net, d);
    CheckFeasibleFlow(net, d, sol.flows, sol.lambda_star);
    const LoadBalanceSolution lb = LoadBalanceFromThroughput(sol);
    CHECK(std::abs(sol.lambda_star * lb.theta_star - 1.0) <= 1e-9);

    std::vector<double> caps = net.Capacities();
    for (double& v : caps) v *= 2.5;
    CHECK(SolveThroughput(net, d, caps).lambda_star ==
          doctest::Approx(2.5 * sol.lambda_star).epsilon(1e-9));
    CHECK(SolveThroughput(net, d.Scaled(4.0)).lambda_star ==
          doctest::Approx(sol.lambda_star / 4.0).epsilon(1e-9));

    const lp::SolveOutcome cold =
        lp::SolveCold(testing::ThroughputStandardForm(net, d, net.Capacities()));
    REQUIRE(cold.status == lp::SolveStatus::kOptimal);
    CHECK(-cold.objective == doctest::Approx(sol.lambda_star).epsilon(1e-9));

    // The latency LP is feasible for beta <= 1.
    LatencyConfig cfg;
    cfg.beta = trial % 3 == 0 ? 1.0 : 0.9;
    const LatencySolution lat = SolveLatencyLinear(net, d, cfg, sol.lambda_star);
    CheckFeasibleFlow(net, d, lat.flows, cfg.beta * sol.lambda_star);
    const std::vector<double> loads = EdgeLoads(lat.flows);
    LatencyConfig linear;
    CHECK(EvalLatency(loads, net, linear) == doctest::Approx(lat.total_delay).epsilon(1e-9));
  }
}

}  // namespace
}  // namespace robustflow::flow
