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

// Semi-Markovian causal graphs and the graph primitives used by the
// identification algorithms.

#ifndef ZTRANSPORT_GRAPH_HPP_
#define ZTRANSPORT_GRAPH_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ztransport {

using NodeSet = std::set<std::string>;
using Edge = std::pair<std::string, std::string>;

bool IsValidNodeName(std::string_view name);

// Observable nodes with directed edges (acyclic) and bidirected edges, each
// bidirected edge standing for one hidden common cause. Node order is the
// declaration order and is preserved by every derived graph.
class SemiMarkovianGraph {
 public:
  SemiMarkovianGraph() = default;

  // Throws InputError on bad names, unknown endpoints, self-loops or
  // duplicate edges, and StructuralError if the directed part has a cycle.
  SemiMarkovianGraph(std::vector<std::string> nodes,
                     const std::vector<Edge>& directed,
                     const std::vector<Edge>& bidirected);

  const std::vector<std::string>& nodes() const { return nodes_; }
  NodeSet node_set() const { return NodeSet(nodes_.begin(), nodes_.end()); }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  bool contains(std::string_view name) const;

  // Position in declaration order; throws InputError for unknown names.
  std::size_t index_of(std::string_view name) const;

  // Directed edges as (parent, child), bidirected edges with endpoints in
  // declaration order. Both sorted by endpoint positions.
  std::vector<Edge> directed_edges() const;
  std::vector<Edge> bidirected_edges() const;

  const std::vector<std::size_t>& parents(std::size_t v) const { return parents_[v]; }
  const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }
  const std::vector<std::size_t>& spouses(std::size_t v) const { return spouses_[v]; }

  // Topological order as node indices, ties broken by declaration order.
  const std::vector<std::size_t>& topological_indices() const { return topo_; }

  // Nodes strictly before `name` in the canonical topological order.
  NodeSet predecessors(std::string_view name) const;

  // Throws InputError naming the first member of `w` not in the graph.
  void require_subset(const NodeSet& w, std::string_view what) const;

  friend bool operator==(const SemiMarkovianGraph& a, const SemiMarkovianGraph& b);

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::size_t>> spouses_;
  std::vector<std::size_t> topo_;
  std::vector<std::size_t> topo_rank_;
};

// A causal diagram plus the nodes pointed at by selection variables.
struct SelectionDiagram {
  SemiMarkovianGraph graph;
  NodeSet s_targets;

  SelectionDiagram() = default;
  SelectionDiagram(SemiMarkovianGraph g, NodeSet s);
};

// Effect of X on Y with experiments available on subsets of Z.
struct Query {
  NodeSet x;
  NodeSet y;
  NodeSet z;

  // Checks membership in `g`, X and Y disjoint, Y non-empty.
  void validate(const SemiMarkovianGraph& g) const;

  friend bool operator==(const Query&, const Query&) = default;
};

struct CComponent {
  NodeSet members;

  friend bool operator==(const CComponent&, const CComponent&) = default;
};

// An(W), inclusive of W; bidirected edges contribute no ancestry.
NodeSet ancestors(const SemiMarkovianGraph& g, const NodeSet& w);

// G[W]: node order is preserved.
SemiMarkovianGraph induced_subgraph(const SemiMarkovianGraph& g, const NodeSet& w);

// Removes directed edges into `cut_incoming`, bidirected edges touching
// `cut_incoming`, and directed edges out of `cut_outgoing`.
SemiMarkovianGraph mutilate(const SemiMarkovianGraph& g, const NodeSet& cut_incoming,
                            const NodeSet& cut_outgoing = {});

// Maximal bidirected-connected node sets, ordered by their earliest member.
std::vector<CComponent> c_components(const SemiMarkovianGraph& g);

std::vector<std::string> topological_order(const SemiMarkovianGraph& g);

// True iff A and B are m-separated by C. A bidirected edge behaves as a
// fresh latent parent of both endpoints. Sets must be pairwise disjoint.
bool m_separated(const SemiMarkovianGraph& g, const NodeSet& a, const NodeSet& b,
                 const NodeSet& c);

// Set helpers shared by the algorithm modules.
NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
bool is_subset(const NodeSet& a, const NodeSet& b);
std::string format_set(const NodeSet& s);

}  // namespace ztransport

#endif  // ZTRANSPORT_GRAPH_HPP_
