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

// Identification of causal effects from observations plus surrogate
// experiments (gid_z), and transport of effects across domains (sid_z, bi).

#ifndef ZTRANSPORT_IDENTIFY_HPP_
#define ZTRANSPORT_IDENTIFY_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "expr.hpp"
#include "graph.hpp"

namespace ztransport {

// Experiments already switched on. gid_z keeps the two sets apart; sid_z
// and bi use a single set.
struct IdentContext {
  NodeSet active_line3;
  NodeSet active_decomp;
};

// Which joint the emitted terms refer to.
struct DistLabel {
  Domain domain = Domain::kSource;
  NodeSet do_set;
};

struct Witness {
  enum class Kind { kHedge, kSHedge };

  Kind kind = Kind::kHedge;
  SemiMarkovianGraph f_graph;
  SemiMarkovianGraph f_sub;
  NodeSet s_targets_in_component;
};

const char* WitnessKindName(Witness::Kind kind);

class IdentResult {
 public:
  IdentResult(ProbExpr formula) : value_(std::move(formula)) {}  // NOLINT
  IdentResult(Witness witness) : value_(std::move(witness)) {}   // NOLINT

  bool ok() const { return std::holds_alternative<ProbExpr>(value_); }
  const ProbExpr& formula() const { return std::get<ProbExpr>(value_); }
  const Witness& witness() const { return std::get<Witness>(value_); }

  std::vector<std::string> warnings;

 private:
  std::variant<ProbExpr, Witness> value_;
};

// Optional instrumentation of a single top-level call.
struct Trace {
  int activations = 0;     // gid_z covering step firing
  int decompositions = 0;  // gid_z multi-component factorization firing
  // Partition reached by the first gid_z factorization test, and the one
  // computed by sid_z over G minus X.
  std::optional<std::vector<NodeSet>> gid_partition;
  std::optional<std::vector<NodeSet>> sid_partition;
};

// Generalized z-identification of P_x(y) from P and experiments on subsets
// of z. `dist` labels the distribution of the call (source, with do-set
// equal to the active experiments); `g` is mutilated by the active sets on
// entry. Precondition violations throw InputError.
IdentResult gid_z(const NodeSet& y, const NodeSet& x, const NodeSet& z, const IdentContext& ctx,
                  const DistLabel& dist, const SemiMarkovianGraph& g, Trace* trace = nullptr);

// Top-level form: empty context, source observational distribution.
IdentResult gid_z(const SemiMarkovianGraph& g, const Query& q, Trace* trace = nullptr);

// Identification of a c-factor from the distribution labelled `dist` in
// `g`, which must already be mutilated by `active`. Failures come back as
// a Hedge witness; sid_z reclassifies them.
IdentResult bi(const NodeSet& y, const NodeSet& x, const DistLabel& dist,
               const SemiMarkovianGraph& g, const NodeSet& active);

// z-transport of P*_x(y) to the target using P*, P and experiments on
// subsets of z in the source.
IdentResult sid_z(const NodeSet& y, const NodeSet& x, const SelectionDiagram& d, const NodeSet& z,
                  Trace* trace = nullptr);

bool direct_transportable(const CComponent& c, const SelectionDiagram& d);

// sid_z with every node controllable.
IdentResult transportable(const NodeSet& y, const NodeSet& x, const SelectionDiagram& d);

}  // namespace ztransport

#endif  // ZTRANSPORT_IDENTIFY_HPP_
