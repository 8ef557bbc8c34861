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

// Dense probability tables and the collection of tables a formula is
// evaluated against.

#ifndef ZTRANSPORT_DISTRIBUTION_HPP_
#define ZTRANSPORT_DISTRIBUTION_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "graph.hpp"

namespace ztransport {

using Assignment = std::map<std::string, int>;

// Joint over named discrete variables, stored in mixed radix with the first
// variable varying fastest. A table over no variables holds one entry.
class ProbabilityTable {
 public:
  ProbabilityTable() : values_{1.0} {}
  ProbabilityTable(std::vector<std::string> variables, std::vector<int> cards,
                   std::vector<double> values);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // `a` must assign every variable of the table; extra keys are ignored.
  double at(const Assignment& a) const;
  double total() const;
  // Sum out everything outside `keep`; variable order is preserved.
  ProbabilityTable marginal(const NodeSet& keep) const;

 private:
  std::vector<std::string> variables_;
  std::vector<int> cards_;
  std::vector<double> values_;
};

// The target observational joint plus source tables keyed by the
// do-assignment that produced them (the empty assignment is the source
// observational joint). Missing source tables may be produced on demand by
// a provider. The provider cache makes lookups non-const internally, so a
// set must not be shared across threads.
class DistributionSet {
 public:
  using Provider = std::function<ProbabilityTable(const Assignment&)>;

  DistributionSet(std::map<std::string, int> cardinality, ProbabilityTable target);

  void add_source(const Assignment& do_assignment, ProbabilityTable table);
  void set_provider(Provider provider) { provider_ = std::move(provider); }

  const ProbabilityTable& target() const { return target_; }
  // Throws EvaluationError when no table exists for `do_assignment`.
  const ProbabilityTable& source(const Assignment& do_assignment) const;
  std::size_t materialized_sources() const { return sources_.size(); }

  // Throws EvaluationError for unknown variables.
  int cardinality(const std::string& name) const;

 private:
  std::map<std::string, int> cardinality_;
  ProbabilityTable target_;
  mutable std::map<Assignment, ProbabilityTable> sources_;
  Provider provider_;
};

}  // namespace ztransport

#endif  // ZTRANSPORT_DISTRIBUTION_HPP_
