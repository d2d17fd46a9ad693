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

// Command-line front end. Main() parses arguments into a RunConfig and
// Run() executes it, writing the report to `out` and diagnostics to `err`.
//
// Exit codes: 0 success, 1 infeasible or disconnected data, 2 usage, input
// or parse error.

#ifndef ROBUSTFLOW_CLI_CLI_H_
#define ROBUSTFLOW_CLI_CLI_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace robustflow::cli {

struct RunConfig {
  std::string command;
  std::string input;
  std::string format = "auto";  // auto, json, sndlib
  std::size_t q = 1;
  double budget = 0.0;
  double beta = 0.9;
  std::string latency = "linear";  // linear, inverse, log
  std::string method = "cutting-plane";
  std::string output = "json";  // json, csv
  // Subgradient steps or cutting-plane iterations; library defaults when unset.
  std::optional<std::size_t> max_iters;
  double tol = 1e-7;
  double step_scale = 0.0;
  double demand_scale = 1.0;
  std::size_t workers = 1;
  bool allow_large = false;
  bool paired_failure = false;
  bool module_capacity = false;
  // Enumeration gate; the ROBUSTFLOW_MAX_SCENARIOS environment variable
  // when unset.
  std::optional<std::uint64_t> max_scenarios;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUsage = 2;

int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// args excludes the program name.
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robustflow::cli

#endif  // ROBUSTFLOW_CLI_CLI_H_
