// Copyright 2026 The ztransport Authors
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

#include "query_file.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "error.hpp"
#include "oracle.hpp"

namespace ztransport {

namespace {

struct Line {
  int number;
  std::string text;
};

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

void require_name(const std::string& name, int line) {
  if (!IsValidNodeName(name)) throw ParseError(line, "invalid node name '" + name + "'");
}

bool reaches(const std::map<std::string, std::vector<std::string>>& children,
             const std::string& from, const std::string& to) {
  std::vector<std::string> stack{from};
  std::set<std::string> seen;
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (!seen.insert(v).second) continue;
    auto it = children.find(v);
    if (it != children.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
  }
  return false;
}

nlohmann::json names_json(const NodeSet& s) {
  return nlohmann::json(std::vector<std::string>(s.begin(), s.end()));
}

}  // namespace

QueryFile parse_query_file(const std::string& text) {
  static const std::regex kEdge(R"(^([A-Za-z0-9_]+)\s*(<->|->)\s*([A-Za-z0-9_]+)$)");
  static const std::regex kSet(R"(^([XYZ])\s*:(.*)$)");

  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      auto first = raw.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      auto last = raw.find_last_not_of(" \t");
      lines.push_back({number, raw.substr(first, last - first + 1)});
    }
  }
  const int last_line = lines.empty() ? 1 : lines.back().number;

  // Pass 1: nodes and edges, which fix the node order.
  std::vector<std::string> nodes;
  std::set<std::string> declared;
  auto mention = [&](const std::string& n, int line) {
    require_name(n, line);
    if (declared.insert(n).second) nodes.push_back(n);
  };
  std::vector<Edge> directed;
  std::vector<Edge> bidirected;
  std::set<Edge> seen_directed;
  std::set<Edge> seen_bidirected;
  std::map<std::string, std::vector<std::string>> children;
  std::vector<const Line*> rest;
  for (const Line& l : lines) {
    std::smatch m;
    std::vector<std::string> words = split_words(l.text);
    if (words.front() == "node") {
      if (words.size() != 2) throw ParseError(l.number, "expected 'node <name>'");
      mention(words[1], l.number);
    } else if (std::regex_match(l.text, m, kEdge)) {
      const std::string a = m[1];
      const std::string b = m[3];
      mention(a, l.number);
      mention(b, l.number);
      if (a == b) throw ParseError(l.number, "self-loop on " + a);
      if (m[2] == "->") {
        if (!seen_directed.insert({a, b}).second) {
          throw ParseError(l.number, "duplicate edge " + a + " -> " + b);
        }
        if (reaches(children, b, a)) {
          throw ParseError(l.number, "edge " + a + " -> " + b + " closes a directed cycle");
        }
        children[a].push_back(b);
        directed.push_back({a, b});
      } else {
        Edge key = a < b ? Edge{a, b} : Edge{b, a};
        if (!seen_bidirected.insert(key).second) {
          throw ParseError(l.number, "duplicate edge " + a + " <-> " + b);
        }
        bidirected.push_back({a, b});
      }
    } else {
      rest.push_back(&l);
    }
  }

  // Pass 2: selection annotations and the query.
  NodeSet sel;
  NodeSet x, y, z;
  int x_line = 0, y_line = 0;
  auto known = [&](const std::string& n, int line) {
    require_name(n, line);
    if (!declared.count(n)) throw ParseError(line, "unknown node '" + n + "'");
  };
  for (const Line* l : rest) {
    std::smatch m;
    std::vector<std::string> words = split_words(l->text);
    if (words.front() == "select") {
      if (words.size() < 2) throw ParseError(l->number, "expected 'select <name>'");
      for (std::size_t i = 1; i < words.size(); ++i) {
        known(words[i], l->number);
        sel.insert(words[i]);
      }
    } else if (std::regex_match(l->text, m, kSet)) {
      NodeSet* target = m[1] == "X" ? &x : (m[1] == "Y" ? &y : &z);
      if (m[1] == "X") x_line = l->number;
      if (m[1] == "Y") y_line = l->number;
      std::string body = m[2];
      std::replace(body.begin(), body.end(), ',', ' ');
      for (const std::string& n : split_words(body)) {
        known(n, l->number);
        target->insert(n);
      }
    } else {
      throw ParseError(l->number, "unrecognized line '" + l->text + "'");
    }
  }
  if (y.empty()) throw ParseError(y_line ? y_line : last_line, "the outcome set Y is empty");
  NodeSet overlap = set_intersection(x, y);
  if (!overlap.empty()) {
    throw ParseError(std::max(x_line, y_line),
                     "X and Y overlap on " + format_set(overlap) + "; they must be disjoint");
  }

  QueryFile qf;
  try {
    qf.diagram = SelectionDiagram(SemiMarkovianGraph(nodes, directed, bidirected), sel);
  } catch (const std::runtime_error& e) {
    throw ParseError(last_line, e.what());
  }
  qf.query = Query{x, y, z};
  return qf;
}

std::string write_query_file(const QueryFile& qf) {
  const SemiMarkovianGraph& g = qf.diagram.graph;
  std::ostringstream out;
  for (const std::string& n : g.nodes()) out << "node " << n << "\n";
  for (const Edge& e : g.directed_edges()) out << e.first << " -> " << e.second << "\n";
  for (const Edge& e : g.bidirected_edges()) out << e.first << " <-> " << e.second << "\n";
  for (const std::string& s : qf.diagram.s_targets) out << "select " << s << "\n";
  auto set_line = [&](const char* label, const NodeSet& s) {
    out << label << ":";
    for (const std::string& n : s) out << " " << n;
    out << "\n";
  };
  set_line("X", qf.query.x);
  set_line("Y", qf.query.y);
  set_line("Z", qf.query.z);
  return out.str();
}

RunReport run_query(const QueryFile& qf) {
  IdentResult r = sid_z(qf.query.y, qf.query.x, qf.diagram, qf.query.z);
  nlohmann::json doc;
  if (r.ok()) {
    doc["status"] = "transportable";
    doc["formula"] = to_json(r.formula());
    doc["formula_text"] = render(r.formula(), RenderFormat::kText);
    doc["formula_latex"] = render(r.formula(), RenderFormat::kLatex);
    doc["witness"] = nullptr;
  } else {
    const Witness& w = r.witness();
    doc["status"] = "not_transportable";
    doc["formula"] = nullptr;
    doc["formula_text"] = nullptr;
    doc["formula_latex"] = nullptr;
    doc["witness"] = {{"kind", WitnessKindName(w.kind)},
                      {"f_nodes", names_json(w.f_graph.node_set())},
                      {"f_sub_nodes", names_json(w.f_sub.node_set())},
                      {"s_targets", names_json(w.s_targets_in_component)}};
  }
  doc["warnings"] = r.warnings;
  return RunReport{std::move(r), std::move(doc)};
}

std::string render_run(const RunReport& report, RenderFormat format) {
  if (format == RenderFormat::kJson) return report.document.dump(2);
  std::string out;
  for (const std::string& w : report.result.warnings) out += "warning: " + w + "\n";
  if (report.result.ok()) {
    return out + render(report.result.formula(), format) + "\n";
  }
  const Witness& w = report.result.witness();
  out += std::string("not transportable: ") + WitnessKindName(w.kind) + " F=" +
         format_set(w.f_graph.node_set()) + " F'=" + format_set(w.f_sub.node_set());
  if (!w.s_targets_in_component.empty()) out += " S->" + format_set(w.s_targets_in_component);
  return out + "\n";
}

ValidationReport validate_query(const QueryFile& qf, std::uint64_t first, std::uint64_t last,
                                int arity, int corrupt) {
  if (first > last) throw InputError("empty seed range");
  RunReport run = run_query(qf);
  if (!run.result.ok()) throw InputError("query is not transportable");
  ProbExpr formula = run.result.formula();
  if (corrupt >= 0) {
    std::vector<ProbExpr> mutants =
        single_term_mutations(formula, qf.diagram.graph, qf.query.z);
    if (static_cast<std::size_t>(corrupt) >= mutants.size()) {
      throw InputError("corruption index out of range (" + std::to_string(mutants.size()) +
                       " available)");
    }
    formula = mutants[static_cast<std::size_t>(corrupt)];
  }
  ValidationReport report;
  report.passed = true;
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t seed = first;; ++seed) {
    DiscreteModelPair pair = generate_pair(qf.diagram, seed, arity);
    double err;
    try {
      err = validate_formula(formula, pair, qf.query);
    } catch (const EvaluationError&) {
      err = INFINITY;
    }
    report.errors.emplace_back(seed, err);
    report.max_error = std::max(report.max_error, err);
    if (!(err <= kValidationTolerance)) report.passed = false;
    rows.push_back({{"seed", seed}, {"max_abs_error", std::isfinite(err) ? nlohmann::json(err)
                                                                          : nlohmann::json(nullptr)}});
    if (seed == last) break;
  }
  report.document = {{"formula_text", render(formula, RenderFormat::kText)},
                     {"tolerance", kValidationTolerance},
                     {"seeds", rows},
                     {"max_abs_error", std::isfinite(report.max_error)
                                           ? nlohmann::json(report.max_error)
                                           : nlohmann::json(nullptr)},
                     {"passed", report.passed}};
  return report;
}

std::string render_validation(const ValidationReport& report) {
  std::ostringstream out;
  out << "formula: " << report.document["formula_text"].get<std::string>() << "\n";
  char buf[64];
  for (const auto& [seed, err] : report.errors) {
    std::snprintf(buf, sizeof buf, "%.3e", err);
    out << "seed " << seed << "  max_abs_error " << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.3e", report.max_error);
  out << (report.passed ? "PASS" : "FAIL") << "  max_abs_error " << buf << "  tolerance 1e-9\n";
  return out.str();
}

std::string components_text(const QueryFile& qf) {
  std::ostringstream out;
  int i = 0;
  for (const CComponent& c : c_components(qf.diagram.graph)) {
    out << "C" << i++ << " " << format_set(c.members);
    NodeSet s = set_intersection(c.members, qf.diagram.s_targets);
    if (!s.empty()) out << "  S->" << format_set(s);
    out << "\n";
  }
  return out.str();
}

}  // namespace ztransport
