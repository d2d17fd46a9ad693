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
#include <map>
#include <string>
#include <utility>

#include "robustflow/ingest/ingest.h"

namespace robustflow::ingest {
namespace {

struct Token {
  std::string_view text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Words and single parentheses; '#' comments run to end of line and a '?'
// at the start of a line marks the format header.
std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#' || (c == '?' && col == 1)) {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
    } else if (c == '(' || c == ')') {
      out.push_back({text.substr(i, 1), line, col});
      advance(1);
    } else {
      std::size_t j = i;
      while (j < text.size() && std::string_view(" \t\r\n()#").find(text[j]) == std::string_view::npos) ++j;
      out.push_back({text.substr(i, j - i), line, col});
      advance(j - i);
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), tokens_(Tokenize(text)) {}

  bool AtEnd() const { return pos_ >= tokens_.size(); }
  const Token& Peek() const { return tokens_[pos_]; }

  [[noreturn]] void Fail(const std::string& message) const {
    if (AtEnd()) {
      std::size_t line = 1, col = 1;
      for (char c : text_) {
        if (c == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw ParseError(line, col, message + " at end of input");
    }
    const Token& t = Peek();
    throw ParseError(t.line, t.column, message + ", found '" + std::string(t.text) + "'");
  }

  Token Next(const char* what) {
    if (AtEnd()) Fail(std::string("expected ") + what);
    return tokens_[pos_++];
  }

  void Expect(std::string_view s) {
    if (AtEnd() || Peek().text != s) Fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  bool Accept(std::string_view s) {
    if (!AtEnd() && Peek().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view Word(const char* what) {
    if (AtEnd() || Peek().text == "(" || Peek().text == ")") Fail(std::string("expected ") + what);
    return tokens_[pos_++].text;
  }

  double Number(const char* what) {
    if (AtEnd()) Fail(std::string("expected ") + what);
    const Token& t = Peek();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      Fail(std::string("expected ") + what);
    }
    ++pos_;
    return v;
  }

  // Skips a parenthesized group whose '(' is the next token.
  void SkipGroup() {
    Expect("(");
    std::size_t depth = 1;
    while (depth > 0) {
      const Token t = Next("')'");
      if (t.text == "(") ++depth;
      if (t.text == ")") --depth;
    }
  }

 private:
  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string NetworkNameFromComments(std::string_view text) {
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    const std::size_t k = line.find("# network ");
    if (k == 0) {
      std::string_view rest = line.substr(10);
      while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.remove_suffix(1);
      return std::string(rest);
    }
    start = end + 1;
  }
  return {};
}

}  // namespace

InstanceDocument ParseSndlibNative(std::string_view text, const SndlibOptions& options) {
  Parser p(text);
  std::map<std::string, std::size_t, std::less<>> node_index;
  InstanceDocument doc;
  doc.source_format = SourceFormat::kSndlibNative;
  doc.name = NetworkNameFromComments(text);
  std::vector<network::Edge> edges;
  bool seen_nodes = false, seen_links = false, seen_demands = false;

  auto node = [&](std::string_view id) {
    const auto it = node_index.find(id);
    if (it == node_index.end()) {
      throw Error(ErrorCode::kUnknownNode, "unknown node '" + std::string(id) + "'");
    }
    return it->second;
  };

  while (!p.AtEnd()) {
    const std::string_view section = p.Word("section name");
    if (section == "NODES") {
      seen_nodes = true;
      p.Expect("(");
      while (!p.Accept(")")) {
        const std::string id(p.Word("node id"));
        if (node_index.count(id)) p.Fail("duplicate node '" + id + "'");
        std::optional<std::array<double, 2>> coords;
        if (p.Accept("(")) {
          const double x = p.Number("longitude");
          const double y = p.Number("latitude");
          p.Expect(")");
          coords = std::array<double, 2>{x, y};
        }
        node_index.emplace(id, doc.node_names.size());
        doc.node_names.push_back(id);
        doc.node_coordinates.push_back(coords);
      }
    } else if (section == "LINKS") {
      if (!seen_nodes) p.Fail("LINKS before NODES");
      seen_links = true;
      p.Expect("(");
      while (!p.Accept(")")) {
        const std::string id(p.Word("link id"));
        p.Expect("(");
        const std::size_t u = node(p.Word("source node"));
        const std::size_t v = node(p.Word("target node"));
        p.Expect(")");
        double capacity = p.Number("pre-installed capacity");
        p.Number("pre-installed capacity cost");
        const double routing_cost = p.Number("routing cost");
        p.Number("setup cost");
        std::vector<double> modules;
        p.Expect("(");
        while (!p.Accept(")")) {
          modules.push_back(p.Number("module capacity"));
          p.Number("module cost");
        }
        if (capacity == 0.0 && options.module_capacity_fallback && !modules.empty()) {
          capacity = modules.front();
        }
        if (!(capacity > 0.0)) {
          throw Error(ErrorCode::kNonPositiveCapacity, "link '" + id + "' has capacity " +
                                                           std::to_string(capacity));
        }
        if (u == v) p.Fail("link '" + id + "' is a self-loop");
        doc.link_groups.push_back({edges.size(), edges.size() + 1});
        edges.push_back({u, v, capacity, routing_cost});
        edges.push_back({v, u, capacity, routing_cost});
      }
    } else if (section == "DEMANDS") {
      if (!seen_nodes) p.Fail("DEMANDS before NODES");
      seen_demands = true;
      p.Expect("(");
      while (!p.Accept(")")) {
        p.Word("demand id");
        p.Expect("(");
        const std::size_t s = node(p.Word("source node"));
        const std::size_t t = node(p.Word("target node"));
        p.Expect(")");
        p.Number("routing unit");
        const double value = p.Number("demand value");
        p.Word("max path length");
        if (value < 0.0) p.Fail("negative demand value");
        if (s == t) p.Fail("demand from a node to itself");
        doc.demand_entries.push_back({s, t, value});
      }
    } else {
      p.SkipGroup();
    }
  }
  if (!seen_nodes || !seen_links || !seen_demands) {
    p.Fail("missing NODES, LINKS or DEMANDS section");
  }

  const std::size_t n = doc.node_names.size();
  doc.network = network::Network(n, std::move(edges));
  doc.demands = network::DemandMatrix(n);
  for (const DemandEntry& d : doc.demand_entries) {
    doc.demands.Set(d.from, d.to, doc.demands(d.from, d.to) + d.value);
  }
  return doc;
}

}  // namespace robustflow::ingest
