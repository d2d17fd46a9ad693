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

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "robustflow/ingest/ingest.h"

namespace robustflow::ingest {

using nlohmann::json;

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::kParseError,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

SchemaError::SchemaError(std::string field, const std::string& message)
    : Error(ErrorCode::kSchemaError, field + ": " + message), field_(std::move(field)) {}

json CanonicalNumber(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  double rounded = 0.0;
  std::from_chars(buf, res.ptr, rounded);
  if (rounded == 0.0) return 0;  // also folds -0
  if (std::abs(rounded) < 9.0e15 && rounded == std::floor(rounded)) {
    return static_cast<std::int64_t>(rounded);
  }
  return rounded;
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json Canonical(const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      json out = json::object();
      for (const auto& [k, v] : j.items()) out[k] = Canonical(v);
      return out;
    }
    case json::value_t::array: {
      json out = json::array();
      for (const auto& v : j) out.push_back(Canonical(v));
      return out;
    }
    case json::value_t::number_float:
      return CanonicalNumber(j.get<double>());
    case json::value_t::number_unsigned:
    case json::value_t::number_integer:
      return CanonicalNumber(j.get<double>());
    default:
      return j;
  }
}

json ParseText(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, "malformed JSON");
  }
}

const json& Member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(key, "missing");
  return *it;
}

double NumberField(const json& obj, const char* key) {
  const json& v = Member(obj, key);
  if (!v.is_number()) throw SchemaError(key, "must be a number");
  return v.get<double>();
}

std::size_t IndexField(const json& obj, const char* key) {
  const json& v = Member(obj, key);
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) throw Error(ErrorCode::kUnknownNode, std::string(key) + " is negative");
  throw SchemaError(key, "must be a non-negative integer");
}

void CheckKeys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(where, "must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw SchemaError(k, "unknown field");
  }
}

}  // namespace

std::string CanonicalizeJson(std::string_view text) { return Dump(Canonical(ParseText(text))); }

InstanceDocument ParseJsonInstance(std::string_view text) {
  const json root = ParseText(text);
  CheckKeys(root, "instance",
            {"n_vertices", "edges", "demands", "name", "node_names", "failure_groups"});
  InstanceDocument doc;
  doc.source_format = SourceFormat::kJson;

  const json& nv = Member(root, "n_vertices");
  if (!nv.is_number_unsigned() || nv.get<std::size_t>() == 0) {
    throw SchemaError("n_vertices", "must be a positive integer");
  }
  const std::size_t n = nv.get<std::size_t>();
  auto vertex = [n](std::size_t v, const char* key) {
    if (v >= n) {
      throw Error(ErrorCode::kUnknownNode,
                  std::string(key) + " " + std::to_string(v) + " is not a vertex");
    }
    return v;
  };

  if (const auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) throw SchemaError("name", "must be a string");
    doc.name = it->get<std::string>();
  }
  if (const auto it = root.find("node_names"); it != root.end()) {
    if (!it->is_array() || it->size() != n) {
      throw SchemaError("node_names", "must be an array of n_vertices strings");
    }
    for (const json& s : *it) {
      if (!s.is_string()) throw SchemaError("node_names", "must be an array of n_vertices strings");
      doc.node_names.push_back(s.get<std::string>());
    }
  }

  const json& edges = Member(root, "edges");
  if (!edges.is_array()) throw SchemaError("edges", "must be an array");
  std::vector<network::Edge> es;
  for (const json& e : edges) {
    CheckKeys(e, "edges", {"tail", "head", "capacity", "delay"});
    network::Edge edge;
    edge.tail = vertex(IndexField(e, "tail"), "tail");
    edge.head = vertex(IndexField(e, "head"), "head");
    edge.capacity = NumberField(e, "capacity");
    edge.delay = NumberField(e, "delay");
    if (edge.tail == edge.head) throw SchemaError("head", "self-loop");
    if (!(edge.capacity > 0.0)) throw SchemaError("capacity", "must be > 0");
    if (!(edge.delay >= 0.0)) throw SchemaError("delay", "must be >= 0");
    es.push_back(edge);
  }
  const std::size_t m = es.size();
  doc.network = network::Network(n, std::move(es));

  const json& demands = Member(root, "demands");
  if (!demands.is_array()) throw SchemaError("demands", "must be an array");
  doc.demands = network::DemandMatrix(n);
  for (const json& d : demands) {
    CheckKeys(d, "demands", {"from", "to", "value"});
    DemandEntry entry;
    entry.from = vertex(IndexField(d, "from"), "from");
    entry.to = vertex(IndexField(d, "to"), "to");
    entry.value = NumberField(d, "value");
    if (entry.from == entry.to) throw SchemaError("to", "equals from");
    if (!(entry.value >= 0.0)) throw SchemaError("value", "must be >= 0");
    doc.demand_entries.push_back(entry);
    doc.demands.Set(entry.from, entry.to, doc.demands(entry.from, entry.to) + entry.value);
  }

  if (const auto it = root.find("failure_groups"); it != root.end()) {
    if (!it->is_array()) throw SchemaError("failure_groups", "must be an array of edge lists");
    std::set<std::size_t> used;
    for (const json& g : *it) {
      if (!g.is_array() || g.empty()) {
        throw SchemaError("failure_groups", "must be an array of non-empty edge lists");
      }
      std::vector<std::size_t> group;
      for (const json& e : g) {
        if (!e.is_number_unsigned() || e.get<std::size_t>() >= m) {
          throw SchemaError("failure_groups", "entries must be edge indices");
        }
        if (!used.insert(e.get<std::size_t>()).second) {
          throw SchemaError("failure_groups", "groups must be disjoint");
        }
        group.push_back(e.get<std::size_t>());
      }
      doc.link_groups.push_back(std::move(group));
    }
  }
  return doc;
}

std::string SerializeInstance(const InstanceDocument& doc) {
  json root = json::object();
  root["n_vertices"] = doc.network.num_vertices();
  json edges = json::array();
  for (const network::Edge& e : doc.network.edges()) {
    edges.push_back({{"tail", e.tail},
                     {"head", e.head},
                     {"capacity", CanonicalNumber(e.capacity)},
                     {"delay", CanonicalNumber(e.delay)}});
  }
  root["edges"] = std::move(edges);
  json demands = json::array();
  for (const DemandEntry& d : doc.demand_entries) {
    demands.push_back({{"from", d.from}, {"to", d.to}, {"value", CanonicalNumber(d.value)}});
  }
  root["demands"] = std::move(demands);
  if (!doc.name.empty()) root["name"] = doc.name;
  if (!doc.node_names.empty()) root["node_names"] = doc.node_names;
  if (!doc.link_groups.empty()) root["failure_groups"] = doc.link_groups;
  return Dump(root);
}

InstanceDocument LoadInstance(const std::string& path, const SndlibOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  InstanceDocument doc = (first != std::string::npos && text[first] == '{')
                             ? ParseJsonInstance(text)
                             : ParseSndlibNative(text, options);
  if (doc.name.empty()) doc.name = std::filesystem::path(path).stem().string();
  return doc;
}

namespace {

std::string EdgeList(const robust::FailureScenario& s) {
  std::string out;
  for (std::size_t i = 0; i < s.deleted_edges.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(s.deleted_edges[i]);
  }
  return out;
}

}  // namespace

std::string SerializeReport(const robust::RobustReport& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::string out = "scenario_edges,value\n";
    for (const robust::ScenarioValue& sv : report.per_scenario) {
      out += EdgeList(sv.scenario) + "," + CanonicalNumber(sv.value).dump() + "\n";
    }
    out += "WORST:" + EdgeList(report.worst_scenario) + "," +
           CanonicalNumber(report.worst_value).dump() + "\n";
    return out;
  }
  json per = json::array();
  for (const robust::ScenarioValue& sv : report.per_scenario) {
    per.push_back({{"deleted_edges", sv.scenario.deleted_edges},
                   {"value", CanonicalNumber(sv.value)}});
  }
  json root = {{"worst_value", CanonicalNumber(report.worst_value)},
               {"worst_scenario", report.worst_scenario.deleted_edges},
               {"scenarios_evaluated", report.scenarios_evaluated},
               {"per_scenario", std::move(per)}};
  return Dump(root);
}

}  // namespace robustflow::ingest
