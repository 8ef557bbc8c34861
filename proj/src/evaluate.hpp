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

// Numerical evaluation of probability expressions.

#ifndef ZTRANSPORT_EVALUATE_HPP_
#define ZTRANSPORT_EVALUATE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "expr.hpp"

namespace ztransport {

// An expression compiled against one DistributionSet. Marginals needed by
// its terms are computed once and reused across bindings.
class FormulaEvaluator {
 public:
  FormulaEvaluator(const ProbExpr& e, const DistributionSet& tables);
  ~FormulaEvaluator();
  FormulaEvaluator(const FormulaEvaluator&) = delete;
  FormulaEvaluator& operator=(const FormulaEvaluator&) = delete;

  const NodeSet& free_variables() const { return free_; }

  // `binding` must cover free_variables(). Throws EvaluationError on
  // missing tables, unbound or out-of-range values and zero denominators.
  double operator()(const Assignment& binding);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  NodeSet free_;
};

double evaluate(const ProbExpr& e, const DistributionSet& tables, const Assignment& binding);

}  // namespace ztransport

#endif  // ZTRANSPORT_EVALUATE_HPP_
