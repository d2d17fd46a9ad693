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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "robustflow/cli/cli.h"
#include "robustflow/ingest/ingest.h"
#include "test_util.h"

namespace robustflow::cli {
namespace {

using nlohmann::json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Call(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = Main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Data(const char* name) { return std::string(ROBUSTFLOW_TEST_DATA) + "/" + name; }

// Drops the columns whose header starts with timing_ and the warm timing row.
std::string StripTiming(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  std::vector<bool> keep;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.rfind("TIMING_", 0) == 0) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      for (const auto& c : cells) keep.push_back(c.rfind("timing_", 0) != 0);
      header = false;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i < keep.size() && keep[i]) out += cells[i] + ",";
    }
    out += "\n";
  }
  return out;
}

TEST_CASE("throughput on NET-A prints 1.25") {
  const Result r = Call({"throughput", "--network", Data("neta.json")});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["lambda"].get<double>() == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(r.out.find("\"lambda\": 1.25") != std::string::npos);
}

TEST_CASE("robust throughput on NET-B prints 0 and the disconnecting scenario") {
  const Result r = Call({"robust-throughput", "--network", Data("netb.json"), "--q", "1"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["worst_value"].get<double>() == 0.0);
  CHECK(j["worst_scenario"] == json::array({0}));
  const Result csv = Call({"robust-throughput", "-n", Data("neta.json"), "-o", "csv"});
  CHECK(csv.out == "scenario_edges,value\n0,0.5\n1,0.75\nWORST:0,0.5\n");
}

TEST_CASE("load balance and latency") {
  const json lb = json::parse(Call({"load-balance", "-n", Data("neta.json")}).out);
  CHECK(lb["theta"].get<double>() == doctest::Approx(0.8));
  const Result lat = Call({"latency", "-n", Data("netc.json")});
  REQUIRE(lat.code == kExitOk);
  CHECK(json::parse(lat.out)["latency"].get<double>() == doctest::Approx(17.0 / 1.8));
  const Result inv = Call({"latency", "-n", Data("netc.json"), "--latency", "inverse"});
  REQUIRE(inv.code == kExitOk);
  CHECK(json::parse(inv.out)["latency"].get<double>() > 0.0);
}

TEST_CASE("exit codes") {
  CHECK(Call({}).code == kExitUsage);
  CHECK(Call({"throughput"}).code == kExitUsage);
  CHECK(Call({"frobnicate", "-n", Data("neta.json")}).code == kExitUsage);
  CHECK(Call({"throughput", "-n", Data("missing.json")}).code == kExitUsage);
  CHECK(Call({"latency", "-n", Data("neta.json"), "--beta", "0"}).code == kExitUsage);
  CHECK(Call({"latency", "-n", Data("neta.json"), "--beta", "1.5"}).code == kExitUsage);
  CHECK(Call({"robustify-throughput", "-n", Data("neta.json"), "--budget", "-1"}).code ==
        kExitUsage);
  CHECK(Call({"robustify-throughput", "-n", Data("neta.json"), "--tol", "0"}).code ==
        kExitUsage);
  CHECK(Call({"throughput", "-n", Data("neta.json"), "--q", "-1"}).code == kExitUsage);
  CHECK(Call({"throughput", "-n", Data("neta.json"), "--output", "xml"}).code == kExitUsage);
  CHECK(Call({"throughput", "-n", Data("neta.json"), "--format", "sndlib"}).code == kExitUsage);
  CHECK(Call({"robust-throughput", "-n", Data("neta.json"), "--paired-failure"}).code ==
        kExitUsage);
  CHECK(Call({"robust-throughput", "-n", Data("neta.json"), "--q", "3"}).code == kExitUsage);
  CHECK(Call({"robust-throughput", "-n", Data("abilene_like.txt"), "--q", "3",
              "--max-scenarios", "100"}).code == kExitUsage);
  CHECK(Call({"--help"}).code == kExitOk);

  const Result inf = Call({"robust-latency", "-n", Data("netc.json")});
  CHECK(inf.code == kExitInfeasible);
  CHECK(inf.out.empty());
  CHECK(inf.err.find("{0} {1} {2}") != std::string::npos);
  CHECK(Call({"load-balance", "-n", Data("netb.json")}).code == kExitOk);
}

TEST_CASE("zero throughput data exits 1") {
  const auto dir = std::filesystem::temp_directory_path() / "robustflow_cli_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "split.json").string();
  std::ofstream(path) << R"({"n_vertices": 3, "edges": [{"tail": 0, "head": 1, "capacity": 1, "delay": 0}],
                             "demands": [{"from": 0, "to": 2, "value": 1}]})";
  const Result r = Call({"load-balance", "-n", path});
  CHECK(r.code == kExitInfeasible);
  CHECK(!r.err.empty());
}

TEST_CASE("robustify commands") {
  for (const char* method : {"cutting-plane", "subgradient"}) {
    const Result r = Call({"robustify-throughput", "-n", Data("neta.json"), "--budget", "1",
                           "--method", method});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(j["delta_b"][1].get<double>() == doctest::Approx(1.0).epsilon(1e-5));
  }
  const Result lat = Call({"robustify-latency", "-n", Data("netc.json"), "--budget", "1",
                           "--demand-scale", "0.5"});
  REQUIRE(lat.code == kExitOk);
  CHECK(json::parse(lat.out)["stop"] == "converged");
  const Result csv = Call({"robustify-throughput", "-n", Data("neta.json"), "--budget", "1",
                           "-o", "csv"});
  CHECK(csv.out.rfind("iteration,value,best_value,lower_bound\n", 0) == 0);
  CHECK(csv.out.find("\nedge,delta_b\n0,0\n1,1\n") != std::string::npos);
}

TEST_CASE("property: throughput matches max flow on random single-pair instances") {
  std::mt19937_64 rng(51);
  const auto dir = std::filesystem::temp_directory_path() / "robustflow_cli_test";
  std::filesystem::create_directories(dir);
  for (int trial = 0; trial < 20; ++trial) {
    ingest::InstanceDocument doc;
    doc.network = testing::RandomNetwork(rng, 3 + trial % 3, trial % 4);
    const std::size_t n = doc.network.num_vertices();
    doc.demand_entries = {{0, n - 1, 1.0 + trial % 3}};
    const std::string path = (dir / ("rand" + std::to_string(trial) + ".json")).string();
    std::ofstream(path) << ingest::SerializeInstance(doc);
    const Result r = Call({"throughput", "-n", path});
    REQUIRE(r.code == kExitOk);
    const double expect =
        testing::MaxFlow(doc.network, doc.network.Capacities(), 0, n - 1) / (1.0 + trial % 3);
    CHECK(json::parse(r.out)["lambda"].get<double>() ==
          doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("property: output is deterministic and independent of --workers") {
  for (const char* cmd : {"robust-throughput", "robust-latency", "robustify-throughput"}) {
    std::vector<std::string> base{cmd, "-n", Data("abilene_like.txt"), "--q", "1",
                                  "--budget", "2", "--beta", "0.5"};
    const Result a = Call(base);
    REQUIRE(a.code == kExitOk);
    CHECK(Call(base).out == a.out);
    auto w = base;
    w.insert(w.end(), {"--workers", "3"});
    CHECK(Call(w).out == a.out);
  }
  const std::vector<std::string> bench{"bench", "-n", Data("abilene_like.txt"), "--q", "1"};
  const Result b1 = Call(bench);
  auto bw = bench;
  bw.insert(bw.end(), {"--workers", "2"});
  CHECK(StripTiming(Call(bench).out) == StripTiming(b1.out));
  CHECK(StripTiming(Call(bw).out) == StripTiming(b1.out));
}

TEST_CASE("bench: warm-started pivots do not exceed cold pivots") {
  const Result r = Call({"bench", "-n", Data("abilene_like.txt"), "--q", "1"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "scenario_edges,warm_value,cold_value,warm_pivots,cold_pivots,timing_cold_us");
  std::size_t rows = 0;
  bool saw_total = false;
  while (std::getline(in, line)) {
    std::vector<std::string> c;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) c.push_back(cell);
    if (c[0] == "TOTAL") {
      saw_total = true;
      CHECK(std::stoul(c[3]) <= std::stoul(c[4]));
    } else if (c[0] != "TIMING_WARM_US") {
      ++rows;
      CHECK(std::stod(c[1]) == doctest::Approx(std::stod(c[2])).epsilon(1e-9));
    }
  }
  CHECK(saw_total);
  CHECK(rows == 30);
}

}  // namespace
}  // namespace robustflow::cli
