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

// Finite structural causal models used as exact ground truth.

#ifndef ZTRANSPORT_ORACLE_HPP_
#define ZTRANSPORT_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "distribution.hpp"
#include "expr.hpp"
#include "graph.hpp"

namespace ztransport {

inline constexpr std::size_t kMaxOracleNodes = 12;
inline constexpr std::size_t kMaxTableEntries = 10'000'000;

// One shared latent per bidirected edge plus a private noise term per
// observable. Each mechanism maps (parents, incident latents, noise) to a
// value through a total lookup table.
struct DiscreteSCM {
  struct Latent {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<double> p;
  };
  struct Mechanism {
    std::vector<std::size_t> parents;
    std::vector<std::size_t> latents;
    std::vector<double> noise;
    // Indexed by input * noise.size() + noise value, where input is the
    // mixed-radix code of parents then latents, first fastest.
    std::vector<int> table;
  };

  SemiMarkovianGraph graph;
  std::vector<int> arity;
  std::vector<Latent> latents;
  std::vector<Mechanism> mechanisms;
};

struct DiscreteModelPair {
  DiscreteSCM source;
  DiscreteSCM target;
  NodeSet s_targets;
};

// Deterministic in (d, seed, arity). Latent cardinality defaults to
// arity squared. Throws InputError for more than kMaxOracleNodes nodes or
// arity below 2.
DiscreteModelPair generate_pair(const SelectionDiagram& d, std::uint64_t seed, int arity = 2,
                                int latent_card = 0);

// P(V minus dom(do) | do), over the remaining nodes in declaration order.
ProbabilityTable enumerate_joint(const DiscreteSCM& m, const Assignment& do_assignment = {});

// P_x(y) as a table over y.
ProbabilityTable ground_truth_effect(const DiscreteSCM& m, const Assignment& x, const NodeSet& y);

// Every table that experiments on subsets of z allow, built eagerly.
// Throws InputError when the total entry count exceeds kMaxTableEntries.
DistributionSet build_distribution_set(const DiscreteModelPair& p, const NodeSet& z);

// Same contents, materialized on first use. Requests for do-sets outside z
// (or equal to all nodes) fail with EvaluationError.
DistributionSet lazy_distribution_set(const DiscreteModelPair& p, const NodeSet& z);

// Max over all values of x, y and any other free variable of |e - P*_x(y)|.
double validate_formula(const ProbExpr& e, const DiscreteModelPair& p, const Query& q);

// Formulas that differ from `e` in exactly one term: a conditioner dropped
// or added, the domain flipped, an intervention dropped or added. Order is
// deterministic.
std::vector<ProbExpr> single_term_mutations(const ProbExpr& e, const SemiMarkovianGraph& g,
                                            const NodeSet& z);

}  // namespace ztransport

#endif  // ZTRANSPORT_ORACLE_HPP_
