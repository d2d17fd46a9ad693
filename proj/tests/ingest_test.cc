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

#include <clocale>
#include <fstream>
#include <random>
#include <sstream>

#include "robustflow/ingest/ingest.h"
#include "test_util.h"

namespace robustflow::ingest {
namespace {

std::string ReadFile(const std::string& name) {
  std::ifstream in(std::string(ROBUSTFLOW_TEST_DATA) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Entries of a section: non-blank, non-comment lines between "NAME (" and
// the closing ")" line.
std::size_t CountSectionLines(const std::string& text, const std::string& section) {
  std::istringstream in(text);
  std::string line;
  bool inside = false;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string body = line.substr(first);
    if (!inside) {
      inside = body.rfind(section + " (", 0) == 0;
    } else if (body.rfind(")", 0) == 0) {
      inside = false;
    } else {
      ++count;
    }
  }
  return count;
}

TEST_CASE("minimal SNDlib document") {
  const InstanceDocument doc = ParseSndlibNative(ReadFile("minimal.txt"));
  CHECK(doc.source_format == SourceFormat::kSndlibNative);
  CHECK(doc.network.num_vertices() == 2);
  REQUIRE(doc.network.num_edges() == 2);
  CHECK(doc.network.edge(0).tail == 0);
  CHECK(doc.network.edge(0).head == 1);
  CHECK(doc.network.edge(1).tail == 1);
  CHECK(doc.network.edge(1).head == 0);
  CHECK(doc.network.edge(0).capacity == 3.0);
  CHECK(doc.network.edge(1).capacity == 3.0);
  CHECK(doc.network.edge(0).delay == 1.0);
  CHECK(doc.demands.NumPositive() == 1);
  CHECK(doc.demands(0, 1) == 2.0);
  CHECK(doc.node_names == std::vector<std::string>{"A", "B"});
  REQUIRE(doc.node_coordinates[1].has_value());
  CHECK((*doc.node_coordinates[1])[0] == 1.0);
  CHECK(doc.link_groups == std::vector<std::vector<std::size_t>>{{0, 1}});
}

TEST_CASE("SNDlib section cardinalities") {
  const std::string text = ReadFile("abilene_like.txt");
  const InstanceDocument doc = ParseSndlibNative(text);
  const std::size_t nodes = CountSectionLines(text, "NODES");
  const std::size_t links = CountSectionLines(text, "LINKS");
  const std::size_t demands = CountSectionLines(text, "DEMANDS");
  CHECK(nodes == 12);
  CHECK(links == 15);
  CHECK(doc.name == "abilene_like");
  CHECK(doc.network.num_vertices() == nodes);
  CHECK(doc.network.num_edges() == 2 * links);
  CHECK(doc.demands.NumPositive() == demands);
  CHECK(doc.link_groups.size() == links);
}

TEST_CASE("SNDlib errors") {
  const std::string good = ReadFile("minimal.txt");
  auto with = [&](const std::string& from, const std::string& to) {
    std::string t = good;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  try {
    ParseSndlibNative(with("D1 ( A B )", "D1 ( A C )"));
    FAIL("expected UnknownNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownNode);
  }
  try {
    ParseSndlibNative(with(") 3.0 0.0", ") 0.0 0.0"));
    FAIL("expected NonPositiveCapacity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveCapacity);
  }
  SndlibOptions fallback;
  fallback.module_capacity_fallback = true;
  const InstanceDocument mod =
      ParseSndlibNative(with(") 3.0 0.0 1.0 0.0 ( )", ") 0.0 0.0 1.0 0.0 ( 40.0 2.0 )"), fallback);
  CHECK(mod.network.edge(0).capacity == 40.0);
  try {
    ParseSndlibNative(with("3.0 0.0 1.0", "3.0 x 1.0"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() == 18);
  }
  CHECK_THROWS_AS(ParseSndlibNative(with("DEMANDS (", "DEMANDS")), ParseError);
  CHECK_THROWS_AS(ParseSndlibNative("NODES ( A B )\nLINKS ( )\n"), ParseError);
  // Unknown sections are skipped when balanced.
  const InstanceDocument extra = ParseSndlibNative(good + "EXTRA ( ( a b ) c )\n");
  CHECK(extra.network.num_edges() == 2);
  CHECK_THROWS_AS(ParseSndlibNative(good + "EXTRA ( ( a b c )\n"), ParseError);
}

TEST_CASE("JSON NET-A") {
  const InstanceDocument doc = ParseJsonInstance(ReadFile("neta.json"));
  CHECK(doc.network.Capacities() == std::vector<double>{3.0, 2.0});
  CHECK(doc.demands(0, 1) == 4.0);
  CHECK(doc.name == "neta");
}

TEST_CASE("JSON schema errors name the field") {
  auto field_of = [](const std::string& text) -> std::string {
    try {
      ParseJsonInstance(text);
    } catch (const SchemaError& e) {
      return e.field();
    }
    return "<none>";
  };
  const std::string edge_tail =
      R"(], "demands": [{"from": 0, "to": 1, "value": 1}]})";
  CHECK(field_of(R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 1, "capacity": -1, "delay": 0})" +
                 edge_tail) == "capacity");
  CHECK(field_of(R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 1, "capacity": 0, "delay": 0})" +
                 edge_tail) == "capacity");
  CHECK(field_of(R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 1, "capacity": 1, "delay": -2})" +
                 edge_tail) == "delay");
  CHECK(field_of(R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 1, "capacity": "x", "delay": 0})" +
                 edge_tail) == "capacity");
  CHECK(field_of(R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 1, "delay": 0})" + edge_tail) ==
        "capacity");
  CHECK(field_of(R"({"edges": [], "demands": []})") == "n_vertices");
  CHECK(field_of(R"({"n_vertices": 2, "edges": [], "demands": [], "extra": 1})") == "extra");
  CHECK(field_of(R"({"n_vertices": 2, "edges": [], "demands": [{"from": 0, "to": 1, "value": -1}]})") ==
        "value");
  CHECK(field_of(R"([1, 2])") == "instance");
  try {
    ParseJsonInstance(R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 5, "capacity": 1, "delay": 0}], "demands": []})");
    FAIL("expected UnknownNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownNode);
  }
  try {
    ParseJsonInstance("{\n  \"n_vertices\": 2,\n  \"edges\": [,]\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
}

TEST_CASE("round trip on the corpus") {
  for (const char* name : {"neta.json", "netb.json", "netc.json"}) {
    const std::string text = ReadFile(name);
    CHECK(SerializeInstance(ParseJsonInstance(text)) == CanonicalizeJson(text));
    CHECK(CanonicalizeJson(text) == text);
  }
  // SNDlib documents survive a trip through JSON.
  const InstanceDocument sn = ParseSndlibNative(ReadFile("abilene_like.txt"));
  const std::string js = SerializeInstance(sn);
  const InstanceDocument back = ParseJsonInstance(js);
  CHECK(SerializeInstance(back) == js);
  CHECK(back.network.edges().size() == sn.network.edges().size());
  CHECK(back.link_groups == sn.link_groups);
  CHECK(back.node_names == sn.node_names);
  CHECK(back.demands.entries() == sn.demands.entries());
}

TEST_CASE("property: serialize(parse(x)) == canonicalize(x) on random instances") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> real(0.01, 1000.0);
  for (int trial = 0; trial < 300; ++trial) {
    const network::Network net = testing::RandomNetwork(rng, 2 + trial % 5, trial % 4);
    // Non-canonical spelling: shuffled keys, floats with trailing zeros and
    // more than 12 significant digits.
    std::ostringstream s;
    s.precision(17);
    s << "{\"edges\": [";
    for (std::size_t e = 0; e < net.num_edges(); ++e) {
      const auto& ed = net.edge(e);
      s << (e ? "," : "") << "{\"delay\": " << ed.delay << ".000, \"capacity\": " << real(rng)
        << ", \"head\": " << ed.head << ", \"tail\": " << ed.tail << "}";
    }
    s << "], \"n_vertices\": " << net.num_vertices() << ", \"demands\": [{\"value\": " << real(rng)
      << ", \"to\": 1, \"from\": 0}]}";
    const std::string text = s.str();
    const std::string canon = CanonicalizeJson(text);
    CHECK(SerializeInstance(ParseJsonInstance(text)) == canon);
    CHECK(SerializeInstance(ParseJsonInstance(canon)) == canon);
  }
}

TEST_CASE("parsing is locale independent") {
  const char* previous = std::setlocale(LC_ALL, nullptr);
  const std::string saved = previous ? previous : "C";
  bool switched = false;
  for (const char* loc : {"de_DE.UTF-8", "de_DE.utf8", "fr_FR.UTF-8"}) {
    if (std::setlocale(LC_ALL, loc)) {
      switched = true;
      break;
    }
  }
  const InstanceDocument doc = ParseSndlibNative(ReadFile("abilene_like.txt"));
  CHECK(doc.network.edge(6).delay == 2.5);
  CHECK(CanonicalNumber(2.5).dump() == "2.5");
  const InstanceDocument js = ParseJsonInstance(
      R"({"n_vertices": 2, "edges": [{"tail": 0, "head": 1, "capacity": 1.5, "delay": 0}], "demands": []})");
  CHECK(js.network.edge(0).capacity == 1.5);
  std::setlocale(LC_ALL, saved.c_str());
  MESSAGE("non-C locale available: " << switched);
}

TEST_CASE("canonical numbers") {
  CHECK(CanonicalNumber(3.0).dump() == "3");
  CHECK(CanonicalNumber(-0.0).dump() == "0");
  CHECK(CanonicalNumber(0.1 + 0.2).dump() == "0.3");
  CHECK(CanonicalNumber(1.0 / 3.0).dump() == "0.333333333333");
  CHECK(CanonicalNumber(17.0 / 1.8).dump() == "9.44444444444");
  CHECK(CanonicalNumber(2.0000000000001).dump() == "2");
}

TEST_CASE("report serialization") {
  const robust::RobustReport r =
      robust::RobustThroughput(testing::NetA(), testing::DemandAB(), 1);
  const std::string csv = SerializeReport(r, ReportFormat::kCsv);
  CHECK(csv == "scenario_edges,value\n0,0.5\n1,0.75\nWORST:0,0.5\n");
  CHECK(SerializeReport(r, ReportFormat::kCsv) == csv);
  const std::string js = SerializeReport(r, ReportFormat::kJson);
  CHECK(SerializeReport(r, ReportFormat::kJson) == js);
  const nlohmann::json parsed = nlohmann::json::parse(js);
  CHECK(parsed["per_scenario"].size() == 2);
  CHECK(parsed["worst_value"].get<double>() == 0.5);
  CHECK(parsed["worst_scenario"] == nlohmann::json::array({0}));
  CHECK(js.find("\"per_scenario\"") < js.find("\"worst_value\""));

  robust::RobustReport empty;
  empty.worst_value = 0.25;
  CHECK(SerializeReport(empty, ReportFormat::kCsv) == "scenario_edges,value\nWORST:,0.25\n");
}

}  // namespace
}  // namespace robustflow::ingest
