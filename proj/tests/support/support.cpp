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

#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ztransport::testing {

SemiMarkovianGraph random_graph(std::mt19937_64& rng, const RandomDiagramOptions& opt) {
  std::uniform_int_distribution<int> size_dist(opt.min_nodes, opt.max_nodes);
  const int n = size_dist(rng);
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back("V" + std::to_string(i + 1));

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::bernoulli_distribution edge(opt.edge_probability);
  std::vector<Edge> directed;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& from = nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      const auto& to = nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
      if (edge(rng)) directed.emplace_back(from, to);
      pairs.emplace_back(i, j);
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::uniform_int_distribution<int> bi_count(0, opt.max_bidirected);
  const std::size_t k = std::min(pairs.size(), static_cast<std::size_t>(bi_count(rng)));
  std::vector<Edge> bidirected;
  for (std::size_t i = 0; i < k; ++i) {
    bidirected.emplace_back(nodes[static_cast<std::size_t>(pairs[i].first)],
                            nodes[static_cast<std::size_t>(pairs[i].second)]);
  }
  return SemiMarkovianGraph(nodes, directed, bidirected);
}

RandomCase random_case(std::uint64_t seed, const RandomDiagramOptions& opt) {
  std::mt19937_64 rng(seed);
  RandomDiagramOptions o = opt;
  o.min_nodes = std::max(o.min_nodes, 2);
  SemiMarkovianGraph g = random_graph(rng, o);

  std::vector<std::string> pool = g.nodes();
  std::shuffle(pool.begin(), pool.end(), rng);
  const std::size_t n = pool.size();
  std::uniform_int_distribution<std::size_t> nx(1, std::min<std::size_t>(2, n - 1));
  const std::size_t x_count = nx(rng);
  std::uniform_int_distribution<std::size_t> ny(1, std::min<std::size_t>(2, n - x_count));
  const std::size_t y_count = ny(rng);

  Query q;
  q.x.insert(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(x_count));
  q.y.insert(pool.begin() + static_cast<std::ptrdiff_t>(x_count),
             pool.begin() + static_cast<std::ptrdiff_t>(x_count + y_count));
  std::bernoulli_distribution pick_z(0.4);
  std::bernoulli_distribution pick_s(0.25);
  NodeSet s;
  for (const std::string& v : g.nodes()) {
    if (pick_z(rng) && !q.y.count(v)) q.z.insert(v);
    if (pick_s(rng)) s.insert(v);
  }
  return RandomCase{SelectionDiagram(std::move(g), std::move(s)), std::move(q)};
}

std::vector<NodeSet> union_find_components(const SemiMarkovianGraph& g) {
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (const Edge& e : g.bidirected_edges()) {
    std::size_t a = find(g.index_of(e.first));
    std::size_t b = find(g.index_of(e.second));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, NodeSet> groups;
  for (std::size_t v = 0; v < g.size(); ++v) groups[find(v)].insert(g.nodes()[v]);
  std::vector<NodeSet> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

bool path_m_separated(const SemiMarkovianGraph& g, const NodeSet& a, const NodeSet& b,
                      const NodeSet& c) {
  // Expanded DAG: observables keep their indices, latents follow.
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> kids(n);
  for (const Edge& e : g.directed_edges()) kids[g.index_of(e.first)].push_back(g.index_of(e.second));
  for (const Edge& e : g.bidirected_edges()) {
    kids.push_back({g.index_of(e.first), g.index_of(e.second)});
  }
  const std::size_t total = kids.size();
  std::vector<std::vector<std::pair<std::size_t, bool>>> adj(total);  // (neighbour, edge points to neighbour)
  for (std::size_t u = 0; u < total; ++u) {
    for (std::size_t v : kids[u]) {
      adj[u].push_back({v, true});
      adj[v].push_back({u, false});
    }
  }
  std::vector<bool> in_c(total, false);
  for (const std::string& v : c) in_c[g.index_of(v)] = true;
  // Nodes with a descendant (inclusive) in C.
  std::vector<bool> opens(total, false);
  for (std::size_t u = 0; u < total; ++u) {
    std::vector<std::size_t> stack{u};
    std::vector<bool> seen(total, false);
    while (!stack.empty()) {
      std::size_t w = stack.back();
      stack.pop_back();
      if (seen[w]) continue;
      seen[w] = true;
      if (in_c[w]) opens[u] = true;
      for (std::size_t k : kids[w]) stack.push_back(k);
    }
  }
  std::vector<bool> in_b(total, false);
  for (const std::string& v : b) in_b[g.index_of(v)] = true;

  std::vector<bool> on_path(total, false);
  // `into_here`: the edge used to reach `u` points into `u`.
  std::function<bool(std::size_t, bool)> dfs = [&](std::size_t u, bool into_here) -> bool {
    if (in_b[u]) return true;
    on_path[u] = true;
    for (auto [v, to_v] : adj[u]) {
      if (on_path[v]) continue;
      const bool out_of_here_is_tail = to_v;  // edge u -> v leaves u by its tail
      const bool collider = into_here && !out_of_here_is_tail;
      const bool passable = collider ? opens[u] : !in_c[u];
      if (passable && dfs(v, to_v)) {
        on_path[u] = false;
        return true;
      }
    }
    on_path[u] = false;
    return false;
  };
  for (const std::string& s : a) {
    std::size_t u = g.index_of(s);
    on_path[u] = true;
    for (auto [v, to_v] : adj[u]) {
      if (dfs(v, to_v)) return false;
    }
    on_path[u] = false;
  }
  return true;
}

namespace {

NodeSet ancestors_within(const SemiMarkovianGraph& g, const NodeSet& within, const NodeSet& of) {
  NodeSet out;
  std::vector<std::string> stack(of.begin(), of.end());
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    if (!out.insert(v).second) continue;
    for (std::size_t p : g.parents(g.index_of(v))) {
      const std::string& name = g.nodes()[p];
      if (within.count(name)) stack.push_back(name);
    }
  }
  return out;
}

NodeSet component_within(const SemiMarkovianGraph& g, const NodeSet& within, const std::string& seed) {
  NodeSet out;
  std::vector<std::string> stack{seed};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    if (!out.insert(v).second) continue;
    for (std::size_t s : g.spouses(g.index_of(v))) {
      const std::string& name = g.nodes()[s];
      if (within.count(name)) stack.push_back(name);
    }
  }
  return out;
}

// Q[C] from Q[T], C a c-component of G[C] inside T.
bool identify_factor(const SemiMarkovianGraph& g, const NodeSet& c, const NodeSet& t) {
  NodeSet a = ancestors_within(g, t, c);
  if (a == c) return true;
  if (a == t) return false;
  return identify_factor(g, c, component_within(g, a, *c.begin()));
}

}  // namespace

bool tian_identifiable(const SemiMarkovianGraph& g, const NodeSet& x, const NodeSet& y) {
  NodeSet rest;
  for (const std::string& v : g.nodes()) {
    if (!x.count(v)) rest.insert(v);
  }
  NodeSet d = ancestors_within(g, rest, y);
  NodeSet done;
  for (const std::string& v : d) {
    if (done.count(v)) continue;
    NodeSet di = component_within(g, d, v);
    done.insert(di.begin(), di.end());
    if (!identify_factor(g, di, component_within(g, g.node_set(), v))) return false;
  }
  return true;
}

std::vector<Assignment> all_assignments(const std::vector<std::string>& vars,
                                        const std::vector<int>& cards) {
  std::vector<Assignment> out;
  std::vector<int> d(vars.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = d[i];
    out.push_back(std::move(a));
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++d[i] < cards[i]) break;
      d[i] = 0;
    }
    if (i == vars.size()) return out;
  }
}

ProbabilityTable truncated_factorization(const DiscreteSCM& m, const Assignment& x) {
  const SemiMarkovianGraph& g = m.graph;
  const ProbabilityTable joint = enumerate_joint(m);
  std::vector<std::string> vars;
  std::vector<int> cards;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!x.count(g.nodes()[i])) {
      vars.push_back(g.nodes()[i]);
      cards.push_back(m.arity[i]);
    }
  }
  std::vector<ProbabilityTable> family;
  std::vector<ProbabilityTable> given;
  for (std::size_t i = 0; i < g.size(); ++i) {
    NodeSet pa;
    for (std::size_t p : g.parents(i)) pa.insert(g.nodes()[p]);
    NodeSet fam = pa;
    fam.insert(g.nodes()[i]);
    family.push_back(joint.marginal(fam));
    given.push_back(joint.marginal(pa));
  }
  std::vector<double> values;
  for (const Assignment& a : all_assignments(vars, cards)) {
    Assignment full = a;
    full.insert(x.begin(), x.end());
    double p = 1.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x.count(g.nodes()[i])) continue;
      p *= family[i].at(full) / given[i].at(full);
    }
    values.push_back(p);
  }
  return ProbabilityTable(vars, cards, values);
}

QueryFile load_query_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_query_file(buf.str());
}

}  // namespace ztransport::testing
