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

#include "robustflow/cli/cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustflow/flow/flow_lp.h"
#include "robustflow/ingest/ingest.h"
#include "robustflow/robust/robust.h"
#include "robustflow/robustify/robustify.h"

namespace robustflow::cli {
namespace {

using nlohmann::json;
using ingest::CanonicalNumber;

// Thrown for invalid option values detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json Numbers(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(CanonicalNumber(x));
  return a;
}

// Rows are edges, columns are sources.
json FlowsJson(const Matrix& f) {
  json a = json::array();
  for (std::size_t e = 0; e < f.rows(); ++e) a.push_back(Numbers(f.row(e)));
  return a;
}

std::string Cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (!v.is_array()) return v.dump();
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += v[i].is_array() ? v[i].dump() : Cell(v[i]);
  }
  return out;
}

// Scalar reports as field,value rows in key order.
std::string KeyValueCsv(const json& obj) {
  std::string out = "field,value\n";
  for (const auto& [k, v] : obj.items()) out += k + "," + Cell(v) + "\n";
  return out;
}

void Emit(const RunConfig& cfg, const json& obj, std::ostream& out) {
  out << (cfg.output == "csv" ? KeyValueCsv(obj) : ingest::Dump(obj));
}

void Validate(const RunConfig& cfg) {
  auto member = [](const std::string& v, std::initializer_list<const char*> set) {
    return std::any_of(set.begin(), set.end(), [&](const char* s) { return v == s; });
  };
  if (!member(cfg.format, {"auto", "json", "sndlib"})) throw UsageError("--format: " + cfg.format);
  if (!member(cfg.output, {"json", "csv"})) throw UsageError("--output: " + cfg.output);
  if (!member(cfg.latency, {"linear", "inverse", "log"})) {
    throw UsageError("--latency: " + cfg.latency);
  }
  if (!member(cfg.method, {"cutting-plane", "subgradient"})) {
    throw UsageError("--method: " + cfg.method);
  }
  if (!(cfg.budget >= 0.0)) throw UsageError("--budget must be >= 0");
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) throw UsageError("--beta must be in (0, 1]");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be > 0");
  if (!(cfg.demand_scale > 0.0)) throw UsageError("--demand-scale must be > 0");
  if (cfg.workers == 0) throw UsageError("--workers must be >= 1");
}

ingest::InstanceDocument Load(const RunConfig& cfg) {
  ingest::SndlibOptions so;
  so.module_capacity_fallback = cfg.module_capacity;
  if (cfg.format == "auto") return ingest::LoadInstance(cfg.input, so);
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read '" + cfg.input + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return cfg.format == "json" ? ingest::ParseJsonInstance(buf.str())
                              : ingest::ParseSndlibNative(buf.str(), so);
}

robust::RobustOptions RobustOpts(const RunConfig& cfg, const ingest::InstanceDocument& doc) {
  robust::RobustOptions o;
  o.q = cfg.q;
  o.workers = cfg.workers;
  o.allow_large = cfg.allow_large;
  o.max_scenarios = cfg.max_scenarios ? *cfg.max_scenarios
                                      : robust::MaxScenariosFromEnv(o.max_scenarios);
  if (cfg.paired_failure) {
    if (doc.link_groups.empty()) throw UsageError("--paired-failure: instance has no link groups");
    o.failure_groups = doc.link_groups;
  }
  return o;
}

flow::LatencyConfig LatencyCfg(const RunConfig& cfg) {
  flow::LatencyConfig c;
  c.beta = cfg.beta;
  c.kind = cfg.latency == "inverse" ? flow::LatencyKind::kInverse
           : cfg.latency == "log"   ? flow::LatencyKind::kLog
                                    : flow::LatencyKind::kLinear;
  c.Validate();
  return c;
}

json Header(const RunConfig& cfg, const ingest::InstanceDocument& doc) {
  return {{"command", cfg.command},
          {"instance", doc.name},
          {"n_vertices", doc.network.num_vertices()},
          {"n_edges", doc.network.num_edges()}};
}

int Throughput(const RunConfig& cfg, const ingest::InstanceDocument& doc, std::ostream& out) {
  const flow::ThroughputSolution s = flow::SolveThroughput(doc.network, doc.demands);
  json r = Header(cfg, doc);
  r["lambda"] = CanonicalNumber(s.lambda_star);
  r["flows"] = FlowsJson(s.flows);
  r["edge_loads"] = Numbers(flow::EdgeLoads(s.flows));
  r["pivots"] = s.pivot_count;
  Emit(cfg, r, out);
  return kExitOk;
}

int LoadBalance(const RunConfig& cfg, const ingest::InstanceDocument& doc, std::ostream& out) {
  const flow::ThroughputSolution s = flow::SolveThroughput(doc.network, doc.demands);
  const flow::LoadBalanceSolution lb = flow::LoadBalanceFromThroughput(s);
  json r = Header(cfg, doc);
  r["theta"] = CanonicalNumber(lb.theta_star);
  r["flows"] = FlowsJson(lb.flows);
  r["edge_loads"] = Numbers(flow::EdgeLoads(lb.flows));
  Emit(cfg, r, out);
  return kExitOk;
}

// Linear delays are optimized by the LP. Inverse and log delays are only
// evaluated, on the maximum-throughput routing scaled to load ratio beta,
// which keeps every edge at or below beta times its capacity.
int Latency(const RunConfig& cfg, const ingest::InstanceDocument& doc, std::ostream& out) {
  const flow::LatencyConfig lc = LatencyCfg(cfg);
  const flow::ThroughputSolution s = flow::SolveThroughput(doc.network, doc.demands);
  json r = Header(cfg, doc);
  r["kind"] = cfg.latency;
  r["beta"] = CanonicalNumber(cfg.beta);
  r["lambda_max"] = CanonicalNumber(s.lambda_star);
  if (lc.kind == flow::LatencyKind::kLinear) {
    const flow::LatencySolution l = flow::SolveLatencyLinear(doc.network, doc.demands, lc,
                                                             s.lambda_star);
    r["latency"] = CanonicalNumber(l.latency);
    r["total_delay"] = CanonicalNumber(l.total_delay);
    r["normalization"] = CanonicalNumber(l.normalization);
    r["flows"] = FlowsJson(l.flows);
    r["edge_loads"] = Numbers(flow::EdgeLoads(l.flows));
  } else {
    Matrix f = s.flows;
    for (std::size_t e = 0; e < f.rows(); ++e) {
      for (double& x : f.row(e)) x *= cfg.beta;
    }
    const std::vector<double> loads = flow::EdgeLoads(f);
    const double normalization = cfg.beta * s.lambda_star * doc.demands.Total();
    if (!(normalization > 0.0)) throw Error(ErrorCode::kZeroThroughput, "nothing is routed");
    const double total = flow::EvalLatency(loads, doc.network, lc);
    r["latency"] = CanonicalNumber(total / normalization);
    r["total_delay"] = CanonicalNumber(total);
    r["normalization"] = CanonicalNumber(normalization);
    r["flows"] = FlowsJson(f);
    r["edge_loads"] = Numbers(loads);
  }
  Emit(cfg, r, out);
  return kExitOk;
}

void EmitRobust(const RunConfig& cfg, const ingest::InstanceDocument& doc,
                const robust::RobustReport& report, json extra, std::ostream& out) {
  if (cfg.output == "csv") {
    out << ingest::SerializeReport(report, ingest::ReportFormat::kCsv);
    return;
  }
  json r = json::parse(ingest::SerializeReport(report, ingest::ReportFormat::kJson));
  r.update(Header(cfg, doc));
  r.update(extra);
  r["q"] = cfg.q;
  out << ingest::Dump(r);
}

int RobustThroughputCmd(const RunConfig& cfg, const ingest::InstanceDocument& doc,
                        std::ostream& out) {
  const robust::RobustEvaluation ev = robust::EvaluateRobustThroughput(
      doc.network, doc.demands, doc.network.Capacities(), RobustOpts(cfg, doc));
  EmitRobust(cfg, doc, ev.report, json::object(), out);
  return kExitOk;
}

int RobustLatencyCmd(const RunConfig& cfg, const ingest::InstanceDocument& doc,
                     std::ostream& out) {
  const flow::LatencyConfig lc = LatencyCfg(cfg);
  if (lc.kind != flow::LatencyKind::kLinear) {
    throw UsageError("robust-latency supports --latency linear only");
  }
  const robust::RobustEvaluation ev =
      robust::EvaluateRobustLatencyLinear(doc.network, doc.demands, lc, RobustOpts(cfg, doc));
  EmitRobust(cfg, doc, ev.report, {{"beta", CanonicalNumber(cfg.beta)}}, out);
  return kExitOk;
}

robustify::RobustifyOptions RobustifyOpts(const RunConfig& cfg,
                                          const ingest::InstanceDocument& doc) {
  robustify::RobustifyOptions o;
  o.method = cfg.method == "subgradient" ? robustify::Method::kSubgradient
                                         : robustify::Method::kCuttingPlane;
  o.robust = RobustOpts(cfg, doc);
  if (cfg.max_iters) {
    o.subgradient.steps = *cfg.max_iters;
    o.cutting_plane.max_iters = *cfg.max_iters;
  }
  o.subgradient.tol = cfg.tol;
  o.subgradient.step_scale = cfg.step_scale;
  o.cutting_plane.tol = cfg.tol;
  return o;
}

void EmitRobustify(const RunConfig& cfg, const ingest::InstanceDocument& doc,
                   const robustify::RobustifyResult& res, std::ostream& out) {
  const auto& hist = res.minimization.history;
  if (cfg.output == "csv") {
    out << "iteration,value,best_value,lower_bound\n";
    for (const auto& h : hist) {
      out << h.iteration << "," << CanonicalNumber(h.value).dump() << ","
          << CanonicalNumber(h.best_value).dump() << ","
          << (h.lower_bound ? CanonicalNumber(*h.lower_bound).dump() : "") << "\n";
    }
    out << "\nedge,delta_b\n";
    for (std::size_t e = 0; e < res.allocation.delta_b.size(); ++e) {
      out << e << "," << CanonicalNumber(res.allocation.delta_b[e]).dump() << "\n";
    }
    return;
  }
  json r = Header(cfg, doc);
  r["q"] = cfg.q;
  r["budget"] = CanonicalNumber(cfg.budget);
  r["method"] = cfg.method;
  r["value"] = CanonicalNumber(res.value);
  r["delta_b"] = Numbers(res.allocation.delta_b);
  r["stop"] = std::string(robustify::StopReasonName(res.minimization.stop));
  r["iterations"] = hist.size();
  json h = json::array();
  for (const auto& it : hist) {
    json row = {{"iteration", it.iteration},
                {"value", CanonicalNumber(it.value)},
                {"best_value", CanonicalNumber(it.best_value)}};
    if (it.lower_bound) row["lower_bound"] = CanonicalNumber(*it.lower_bound);
    h.push_back(std::move(row));
  }
  r["history"] = std::move(h);
  out << ingest::Dump(r);
}

int RobustifyThroughputCmd(const RunConfig& cfg, const ingest::InstanceDocument& doc,
                           std::ostream& out) {
  const robustify::RobustifyResult res = robustify::RobustifyThroughput(
      doc.network, doc.demands, cfg.budget, RobustifyOpts(cfg, doc));
  EmitRobustify(cfg, doc, res, out);
  return kExitOk;
}

int RobustifyLatencyCmd(const RunConfig& cfg, const ingest::InstanceDocument& doc,
                        std::ostream& out) {
  const robustify::RobustifyResult res = robustify::RobustifyLatencyLinear(
      doc.network, doc.demands, cfg.budget, RobustifyOpts(cfg, doc), cfg.demand_scale);
  EmitRobustify(cfg, doc, res, out);
  return kExitOk;
}

// Robust throughput evaluated twice: once by the warm-started scenario tree
// and once by an independent solve per scenario. Columns prefixed with
// timing_ are the only non-deterministic output.
int Bench(const RunConfig& cfg, const ingest::InstanceDocument& doc, std::ostream& out) {
  using Clock = std::chrono::steady_clock;
  auto micros = [](Clock::duration d) {
    return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
  };
  robust::RobustOptions ro = RobustOpts(cfg, doc);
  ro.keep_per_scenario = true;
  const auto t0 = Clock::now();
  const robust::RobustEvaluation ev = robust::EvaluateRobustThroughput(
      doc.network, doc.demands, doc.network.Capacities(), ro);
  const auto warm_time = Clock::now() - t0;

  out << "scenario_edges,warm_value,cold_value,warm_pivots,cold_pivots,timing_cold_us\n";
  std::size_t cold_total = 0;
  Clock::duration cold_time{};
  for (const robust::ScenarioValue& sv : ev.report.per_scenario) {
    std::vector<double> caps = doc.network.Capacities();
    for (std::size_t e : sv.scenario.deleted_edges) caps[e] = 0.0;
    const auto c0 = Clock::now();
    const flow::ThroughputSolution cold = flow::SolveThroughput(doc.network, doc.demands, caps);
    const auto dt = Clock::now() - c0;
    cold_time += dt;
    cold_total += cold.pivot_count;
    std::string edges;
    for (std::size_t i = 0; i < sv.scenario.deleted_edges.size(); ++i) {
      edges += (i ? ";" : "") + std::to_string(sv.scenario.deleted_edges[i]);
    }
    out << edges << "," << CanonicalNumber(sv.value).dump() << ","
        << CanonicalNumber(cold.lambda_star).dump() << "," << sv.pivots << ","
        << cold.pivot_count << "," << micros(dt) << "\n";
  }
  // The warm total includes the nominal solve and the interior tree nodes.
  out << "TOTAL," << CanonicalNumber(ev.report.worst_value).dump() << ",,"
      << ev.report.pivots_total << "," << cold_total << "," << micros(cold_time) << "\n";
  out << "TIMING_WARM_US,,,,," << micros(warm_time) << "\n";
  return kExitOk;
}

int Dispatch(const RunConfig& cfg, std::ostream& out) {
  Validate(cfg);
  const ingest::InstanceDocument doc = Load(cfg);
  if (cfg.command == "throughput") return Throughput(cfg, doc, out);
  if (cfg.command == "load-balance") return LoadBalance(cfg, doc, out);
  if (cfg.command == "latency") return Latency(cfg, doc, out);
  if (cfg.command == "robust-throughput") return RobustThroughputCmd(cfg, doc, out);
  if (cfg.command == "robust-latency") return RobustLatencyCmd(cfg, doc, out);
  if (cfg.command == "robustify-throughput") return RobustifyThroughputCmd(cfg, doc, out);
  if (cfg.command == "robustify-latency") return RobustifyLatencyCmd(cfg, doc, out);
  if (cfg.command == "bench") return Bench(cfg, doc, out);
  throw UsageError("unknown command '" + cfg.command + "'");
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaError:
    case ErrorCode::kUnknownNode:
    case ErrorCode::kNonPositiveCapacity:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kTooManyScenarios:
      return kExitUsage;
    default:
      return kExitInfeasible;
  }
}

}  // namespace

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream buf;  // nothing reaches `out` unless the run succeeds
    const int code = Dispatch(config, buf);
    out << buf.str();
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const robust::ScenarioInfeasibleError& e) {
    err << "error: " << e.what() << "\ninfeasible scenarios:";
    for (const robust::FailureScenario& s : e.scenarios()) {
      err << " {";
      for (std::size_t i = 0; i < s.deleted_edges.size(); ++i) {
        err << (i ? "," : "") << s.deleted_edges[i];
      }
      err << "}";
    }
    err << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
}

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust multi-commodity flow analysis", "robustflow"};
  app.require_subcommand(1);
  RunConfig cfg;

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"throughput", "maximum concurrent flow lambda*"},
      {"load-balance", "minimal maximum relative edge load theta*"},
      {"latency", "average latency at load ratio beta"},
      {"robust-throughput", "worst throughput over q-edge failures"},
      {"robust-latency", "worst linear latency over q-edge failures"},
      {"robustify-throughput", "spend a capacity budget to maximize robust throughput"},
      {"robustify-latency", "spend a capacity budget to minimize robust total delay"},
      {"bench", "warm-started scenario tree against per-scenario solves (CSV)"},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--network,-n", cfg.input, "instance file (JSON or SNDlib native)")
        ->required();
    sub->add_option("--format", cfg.format, "auto, json or sndlib");
    sub->add_option("--output,-o", cfg.output, "json or csv");
    sub->add_option("--q", cfg.q, "number of failing edges or links");
    sub->add_option("--budget,-B", cfg.budget, "capacity budget");
    sub->add_option("--beta", cfg.beta, "load ratio in (0, 1]");
    sub->add_option("--latency", cfg.latency, "linear, inverse or log");
    sub->add_option("--method", cfg.method, "cutting-plane or subgradient");
    sub->add_option("--max-iters", cfg.max_iters, "outer iterations or subgradient steps");
    sub->add_option("--tol", cfg.tol, "stopping tolerance");
    sub->add_option("--step-scale", cfg.step_scale, "subgradient gamma_0 (0: the budget)");
    sub->add_option("--demand-scale", cfg.demand_scale, "demand multiplier for robustify-latency");
    sub->add_option("--workers", cfg.workers, "threads for scenario evaluation");
    sub->add_option("--max-scenarios", cfg.max_scenarios, "enumeration gate");
    sub->add_flag("--allow-large", cfg.allow_large, "ignore the enumeration gate");
    sub->add_flag("--paired-failure", cfg.paired_failure,
                  "fail both directions of a link together");
    sub->add_flag("--module-capacity", cfg.module_capacity,
                  "SNDlib: use the first module capacity when none is pre-installed");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return Run(cfg, out, err);
}

}  // namespace robustflow::cli
