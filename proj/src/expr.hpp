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

// Symbolic probability expressions: the output language of the
// identification algorithms.
//
// Every variable stands for its own value slot: the term P_{z}(y|x) reads
// "probability of Y=y given X=x under do(Z=z)", and the slots are bound at
// evaluation time (free) or by an enclosing sum (bound).

#ifndef ZTRANSPORT_EXPR_HPP_
#define ZTRANSPORT_EXPR_HPP_

#include <memory>
#include <string>
#include <vector>

#include "graph.hpp"
#include "json.hpp"

namespace ztransport {

// Source terms may carry a do-set; target terms never do.
enum class Domain { kSource, kTarget };

struct ProbTerm {
  Domain domain = Domain::kSource;
  NodeSet interventions;
  NodeSet outcome;
  NodeSet conditioners;

  friend bool operator==(const ProbTerm&, const ProbTerm&) = default;
};

class ProbExpr {
 public:
  enum class Kind { kOne, kTerm, kProduct, kSum, kFraction };

  // The multiplicative identity.
  ProbExpr();

  static ProbExpr one() { return ProbExpr(); }
  static ProbExpr term(ProbTerm t);
  static ProbExpr term(Domain domain, NodeSet interventions, NodeSet outcome,
                       NodeSet conditioners = {});
  static ProbExpr product(std::vector<ProbExpr> factors);
  static ProbExpr sum(NodeSet over, ProbExpr body);
  // Ratio of two expressions; emitted only for conditionals of
  // marginalized c-factor products that admit no closed term form.
  static ProbExpr fraction(ProbExpr numerator, ProbExpr denominator);

  Kind kind() const;
  bool is_one() const { return kind() == Kind::kOne; }

  const ProbTerm& as_term() const;
  const std::vector<ProbExpr>& factors() const;
  const NodeSet& bound() const;
  const ProbExpr& body() const;
  const ProbExpr& numerator() const;
  const ProbExpr& denominator() const;

  // Variables whose value slots are not bound by an enclosing sum.
  NodeSet free_variables() const;

  friend bool operator==(const ProbExpr& a, const ProbExpr& b);

 private:
  struct Rep;
  explicit ProbExpr(std::shared_ptr<const Rep> rep);

  std::shared_ptr<const Rep> rep_;
};

// Throws StructuralError if `e` violates the AST invariants: term sets
// overlap, a target term has a do-set, an empty outcome, a sum binds a
// variable that is not free in its body or that an enclosing sum already
// binds.
void check_well_formed(const ProbExpr& e);

// Canonical form for structural comparison. Flattens products and sorts
// their factors, absorbs One, merges nested sums, and marginalizes a summed
// variable that occurs only in the outcome of a single term. Semantics
// preserving; throws StructuralError on ill-formed input.
ProbExpr normalize(const ProbExpr& e);

enum class RenderFormat { kText, kLatex, kJson };

std::string render(const ProbExpr& e, RenderFormat format);

nlohmann::json to_json(const ProbExpr& e);
// Throws StructuralError on schema violations.
ProbExpr from_json(const nlohmann::json& j);

// Strict weak order used to sort product factors.
bool canonical_less(const ProbExpr& a, const ProbExpr& b);

// Structural shape check of an emitted transport formula: target terms are
// do-free and every source do-set lies within `controllable`.
bool has_transport_shape(const ProbExpr& e, const NodeSet& controllable);

// Every term in `e`, in traversal order.
std::vector<ProbTerm> collect_terms(const ProbExpr& e);

}  // namespace ztransport

#endif  // ZTRANSPORT_EXPR_HPP_
