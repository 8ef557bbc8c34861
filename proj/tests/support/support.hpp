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

// Test-only generators and independent reference implementations. None of
// the oracles here call into the algorithms they are used to check.

#ifndef ZTRANSPORT_TESTS_SUPPORT_HPP_
#define ZTRANSPORT_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "query_file.hpp"

namespace ztransport::testing {

struct RandomDiagramOptions {
  int min_nodes = 2;
  int max_nodes = 7;
  int max_bidirected = 4;
  double edge_probability = 0.35;
};

struct RandomCase {
  SelectionDiagram diagram;
  Query query;
};

SemiMarkovianGraph random_graph(std::mt19937_64& rng, const RandomDiagramOptions& opt);

// Random diagram with nonempty disjoint X and Y and random Z and S.
RandomCase random_case(std::uint64_t seed, const RandomDiagramOptions& opt = {});

// Components by union-find over the bidirected edges, each sorted, the
// list sorted by first member's declaration index.
std::vector<NodeSet> union_find_components(const SemiMarkovianGraph& g);

// m-separation by enumerating every simple path between A and B in the
// graph with each bidirected edge expanded into an explicit latent parent.
bool path_m_separated(const SemiMarkovianGraph& g, const NodeSet& a, const NodeSet& b,
                      const NodeSet& c);

// Plain identifiability of P_x(y) from P by c-factor reduction over
// ancestral sets. Decision only.
bool tian_identifiable(const SemiMarkovianGraph& g, const NodeSet& x, const NodeSet& y);

// For a graph without bidirected edges: P_x(v minus x) as the truncated
// product of the observational conditionals, read off the observational
// joint of `m`. Variables in declaration order, like enumerate_joint.
ProbabilityTable truncated_factorization(const DiscreteSCM& m, const Assignment& x);

// Reads and parses a query file; throws on I/O or syntax errors.
QueryFile load_query_file(const std::string& path);

// Every value of `vars` under the model's arities, first variable fastest.
std::vector<Assignment> all_assignments(const std::vector<std::string>& vars,
                                        const std::vector<int>& cards);

}  // namespace ztransport::testing

#endif  // ZTRANSPORT_TESTS_SUPPORT_HPP_
