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

#include "graph.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <queue>

#include "error.hpp"

namespace ztransport {

bool IsValidNodeName(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(), [&](char c) { return alpha(c) || digit(c); });
}

SemiMarkovianGraph::SemiMarkovianGraph(std::vector<std::string> nodes,
                                       const std::vector<Edge>& directed,
                                       const std::vector<Edge>& bidirected)
    : nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!IsValidNodeName(nodes_[i])) throw InputError("invalid node name '" + nodes_[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes_[j] == nodes_[i]) throw InputError("duplicate node '" + nodes_[i] + "'");
    }
  }
  parents_.assign(n, {});
  children_.assign(n, {});
  spouses_.assign(n, {});

  auto endpoints = [&](const Edge& e, const char* kind) {
    auto find = [&](const std::string& name) {
      auto it = std::find(nodes_.begin(), nodes_.end(), name);
      if (it == nodes_.end()) {
        throw InputError(std::string(kind) + " edge endpoint '" + name + "' is not a node");
      }
      return static_cast<std::size_t>(it - nodes_.begin());
    };
    std::size_t a = find(e.first);
    std::size_t b = find(e.second);
    if (a == b) throw InputError(std::string(kind) + " self-loop on '" + e.first + "'");
    return std::make_pair(a, b);
  };

  for (const Edge& e : directed) {
    auto [a, b] = endpoints(e, "directed");
    if (std::find(children_[a].begin(), children_[a].end(), b) != children_[a].end()) {
      throw InputError("duplicate edge " + e.first + " -> " + e.second);
    }
    children_[a].push_back(b);
    parents_[b].push_back(a);
  }
  for (const Edge& e : bidirected) {
    auto [a, b] = endpoints(e, "bidirected");
    if (std::find(spouses_[a].begin(), spouses_[a].end(), b) != spouses_[a].end()) {
      throw InputError("duplicate edge " + e.first + " <-> " + e.second);
    }
    spouses_[a].push_back(b);
    spouses_[b].push_back(a);
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(parents_[v].begin(), parents_[v].end());
    std::sort(children_[v].begin(), children_[v].end());
    std::sort(spouses_[v].begin(), spouses_[v].end());
  }

  // Kahn's algorithm; the ready set is a min-heap on declaration position.
  std::vector<std::size_t> indegree(n);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = parents_[v].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (std::size_t c : children_[v]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (topo_.size() != n) {
    for (std::size_t v = 0; v < n; ++v) {
      if (indegree[v] != 0) throw StructuralError("directed cycle through '" + nodes_[v] + "'");
    }
  }
  topo_rank_.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) topo_rank_[topo_[r]] = r;
}

bool SemiMarkovianGraph::contains(std::string_view name) const {
  return std::find(nodes_.begin(), nodes_.end(), name) != nodes_.end();
}

std::size_t SemiMarkovianGraph::index_of(std::string_view name) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) throw InputError("unknown node '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<Edge> SemiMarkovianGraph::directed_edges() const {
  std::vector<Edge> out;
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    for (std::size_t b : children_[a]) out.emplace_back(nodes_[a], nodes_[b]);
  }
  return out;
}

std::vector<Edge> SemiMarkovianGraph::bidirected_edges() const {
  std::vector<Edge> out;
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    for (std::size_t b : spouses_[a]) {
      if (a < b) out.emplace_back(nodes_[a], nodes_[b]);
    }
  }
  return out;
}

NodeSet SemiMarkovianGraph::predecessors(std::string_view name) const {
  std::size_t v = index_of(name);
  NodeSet out;
  for (std::size_t r = 0; r < topo_rank_[v]; ++r) out.insert(nodes_[topo_[r]]);
  return out;
}

void SemiMarkovianGraph::require_subset(const NodeSet& w, std::string_view what) const {
  for (const std::string& name : w) {
    if (!contains(name)) {
      throw InputError("unknown node '" + name + "' in " + std::string(what));
    }
  }
}

bool operator==(const SemiMarkovianGraph& a, const SemiMarkovianGraph& b) {
  return a.nodes_ == b.nodes_ && a.parents_ == b.parents_ && a.spouses_ == b.spouses_;
}

SelectionDiagram::SelectionDiagram(SemiMarkovianGraph g, NodeSet s)
    : graph(std::move(g)), s_targets(std::move(s)) {
  graph.require_subset(s_targets, "selection targets");
}

void Query::validate(const SemiMarkovianGraph& g) const {
  g.require_subset(x, "X");
  g.require_subset(y, "Y");
  g.require_subset(z, "Z");
  if (y.empty()) throw InputError("Y must be non-empty");
  NodeSet both = set_intersection(x, y);
  if (!both.empty()) throw InputError("X and Y must be disjoint (both contain " + format_set(both) + ")");
}

NodeSet ancestors(const SemiMarkovianGraph& g, const NodeSet& w) {
  g.require_subset(w, "ancestor query");
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack;
  for (const std::string& name : w) {
    std::size_t v = g.index_of(name);
    if (!seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t p : g.parents(v)) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  NodeSet out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (seen[v]) out.insert(g.nodes()[v]);
  }
  return out;
}

SemiMarkovianGraph induced_subgraph(const SemiMarkovianGraph& g, const NodeSet& w) {
  g.require_subset(w, "induced subgraph");
  std::vector<std::string> nodes;
  for (const std::string& name : g.nodes()) {
    if (w.count(name)) nodes.push_back(name);
  }
  std::vector<Edge> directed;
  for (const Edge& e : g.directed_edges()) {
    if (w.count(e.first) && w.count(e.second)) directed.push_back(e);
  }
  std::vector<Edge> bidirected;
  for (const Edge& e : g.bidirected_edges()) {
    if (w.count(e.first) && w.count(e.second)) bidirected.push_back(e);
  }
  return SemiMarkovianGraph(std::move(nodes), directed, bidirected);
}

SemiMarkovianGraph mutilate(const SemiMarkovianGraph& g, const NodeSet& cut_incoming,
                            const NodeSet& cut_outgoing) {
  g.require_subset(cut_incoming, "mutilation (incoming)");
  g.require_subset(cut_outgoing, "mutilation (outgoing)");
  std::vector<Edge> directed;
  for (const Edge& e : g.directed_edges()) {
    if (cut_incoming.count(e.second) || cut_outgoing.count(e.first)) continue;
    directed.push_back(e);
  }
  std::vector<Edge> bidirected;
  for (const Edge& e : g.bidirected_edges()) {
    if (cut_incoming.count(e.first) || cut_incoming.count(e.second)) continue;
    bidirected.push_back(e);
  }
  return SemiMarkovianGraph(g.nodes(), directed, bidirected);
}

std::vector<CComponent> c_components(const SemiMarkovianGraph& g) {
  const std::size_t n = g.size();
  std::vector<int> label(n, -1);
  std::vector<CComponent> out;
  // Scanning in declaration order makes the first member of each component
  // its earliest node, which fixes the output order.
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<std::size_t> stack{start};
    label[start] = id;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      out.back().members.insert(g.nodes()[v]);
      for (std::size_t s : g.spouses(v)) {
        if (label[s] < 0) {
          label[s] = id;
          stack.push_back(s);
        }
      }
    }
  }
  return out;
}

std::vector<std::string> topological_order(const SemiMarkovianGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.size());
  for (std::size_t v : g.topological_indices()) out.push_back(g.nodes()[v]);
  return out;
}

bool m_separated(const SemiMarkovianGraph& g, const NodeSet& a, const NodeSet& b,
                 const NodeSet& c) {
  g.require_subset(a, "m-separation (first set)");
  g.require_subset(b, "m-separation (second set)");
  g.require_subset(c, "m-separation (conditioning set)");
  if (!set_intersection(a, b).empty() || !set_intersection(a, c).empty() ||
      !set_intersection(b, c).empty()) {
    throw InputError("m-separation sets must be pairwise disjoint");
  }
  if (a.empty() || b.empty()) return true;

  // Moralize the ancestral set of A u B u C, with one latent vertex per
  // bidirected edge, then test reachability avoiding C.
  const std::size_t n = g.size();
  NodeSet relevant = ancestors(g, set_union(set_union(a, b), c));
  std::vector<bool> keep(n, false);
  for (const std::string& name : relevant) keep[g.index_of(name)] = true;

  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (keep[v]) parents[v] = g.parents(v);
  }
  std::vector<std::vector<std::size_t>> moral(n);
  std::size_t next = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    for (std::size_t s : g.spouses(v)) {
      if (v < s && keep[s]) {
        // Latent vertex `next` with children v and s.
        parents[v].push_back(next);
        parents[s].push_back(next);
        moral.emplace_back();
        ++next;
      }
    }
  }
  auto link = [&](std::size_t u, std::size_t v) {
    moral[u].push_back(v);
    moral[v].push_back(u);
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    const auto& ps = parents[v];
    for (std::size_t i = 0; i < ps.size(); ++i) {
      link(ps[i], v);
      for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
    }
  }

  std::vector<bool> blocked(moral.size(), false);
  for (const std::string& name : c) blocked[g.index_of(name)] = true;
  std::vector<bool> seen(moral.size(), false);
  std::vector<std::size_t> stack;
  for (const std::string& name : a) {
    std::size_t v = g.index_of(name);
    seen[v] = true;
    stack.push_back(v);
  }
  std::vector<bool> target(moral.size(), false);
  for (const std::string& name : b) target[g.index_of(name)] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (target[v]) return false;
    for (std::size_t u : moral[v]) {
      if (!seen[u] && !blocked[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  return true;
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool is_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string format_set(const NodeSet& s) {
  std::string out = "{";
  bool first = true;
  for (const std::string& name : s) {
    if (!first) out += ",";
    out += name;
    first = false;
  }
  return out + "}";
}

}  // namespace ztransport
