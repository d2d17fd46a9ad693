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

// Reading network instances and writing reports.
//
// Two input formats are understood: the SNDlib native text format and a
// JSON interchange format
//
//   {"n_vertices": 2,
//    "edges": [{"tail": 0, "head": 1, "capacity": 3, "delay": 0}],
//    "demands": [{"from": 0, "to": 1, "value": 4}],
//    "name": "...", "node_names": [...], "failure_groups": [[0, 1]]}
//
// where name, node_names and failure_groups are optional. All output is
// deterministic: object keys sorted, numbers rounded to 12 significant
// digits, integral numbers written without a fraction.

#ifndef ROBUSTFLOW_INGEST_INGEST_H_
#define ROBUSTFLOW_INGEST_INGEST_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "robustflow/common.h"
#include "robustflow/network/network.h"
#include "robustflow/robust/robust.h"

namespace robustflow::ingest {

enum class SourceFormat { kSndlibNative, kJson };

struct DemandEntry {
  std::size_t from = 0;
  std::size_t to = 0;
  double value = 0.0;
};

struct InstanceDocument {
  std::string name;
  SourceFormat source_format = SourceFormat::kJson;
  network::Network network;
  network::DemandMatrix demands;  // repeated pairs are summed
  std::vector<DemandEntry> demand_entries;  // as listed in the input
  std::vector<std::string> node_names;      // empty when the input has none
  std::vector<std::optional<std::array<double, 2>>> node_coordinates;
  // Edges that fail together; for SNDlib the two directions of each link.
  std::vector<std::vector<std::size_t>> link_groups;
};

// Malformed text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed JSON that violates the instance schema; field() names the
// offending member.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SndlibOptions {
  // Use the first module capacity when the pre-installed capacity is 0.
  bool module_capacity_fallback = false;
};

// Every link (u, v) becomes edges u->v (index 2k) and v->u (2k + 1) with
// the full pre-installed capacity and the routing cost as delay.
// Throws ParseError, Error(kUnknownNode) or Error(kNonPositiveCapacity).
InstanceDocument ParseSndlibNative(std::string_view text, const SndlibOptions& options = {});

// Throws ParseError, SchemaError or Error(kUnknownNode).
InstanceDocument ParseJsonInstance(std::string_view text);

// Canonical JSON encoding of a document; ParseJsonInstance inverts it.
std::string SerializeInstance(const InstanceDocument& doc);

// Re-encodes arbitrary JSON text with the canonical layout and number
// format. Throws ParseError.
std::string CanonicalizeJson(std::string_view text);

// Reads a file; JSON if its first non-blank character is '{', SNDlib
// otherwise. An empty document name is replaced by the file stem.
// Throws Error(kInvalidArgument) if the file cannot be read.
InstanceDocument LoadInstance(const std::string& path, const SndlibOptions& options = {});

// v rounded to 12 significant digits, as an integer when integral.
nlohmann::json CanonicalNumber(double v);
std::string Dump(const nlohmann::json& j);

enum class ReportFormat { kJson, kCsv };

// CSV columns are scenario_edges (edge indices joined by ';') and value,
// one row per kept scenario and a final row for the worst scenario with
// scenario_edges prefixed by "WORST:".
std::string SerializeReport(const robust::RobustReport& report, ReportFormat format);

}  // namespace robustflow::ingest

#endif  // ROBUSTFLOW_INGEST_INGEST_H_
