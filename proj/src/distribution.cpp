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

#include "distribution.hpp"

#include <numeric>

#include "error.hpp"

namespace ztransport {

ProbabilityTable::ProbabilityTable(std::vector<std::string> variables, std::vector<int> cards,
                                   std::vector<double> values)
    : variables_(std::move(variables)), cards_(std::move(cards)), values_(std::move(values)) {
  if (variables_.size() != cards_.size()) {
    throw InputError("table variable and cardinality lists differ in length");
  }
  std::size_t expected = 1;
  for (int c : cards_) {
    if (c < 1) throw InputError("table cardinality must be positive");
    expected *= static_cast<std::size_t>(c);
  }
  if (values_.size() != expected) throw InputError("table has the wrong number of entries");
}

double ProbabilityTable::at(const Assignment& a) const {
  std::size_t index = 0;
  std::size_t stride = 1;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    auto it = a.find(variables_[i]);
    if (it == a.end()) throw EvaluationError("no value for table variable " + variables_[i]);
    if (it->second < 0 || it->second >= cards_[i]) {
      throw EvaluationError("value out of range for " + variables_[i]);
    }
    index += stride * static_cast<std::size_t>(it->second);
    stride *= static_cast<std::size_t>(cards_[i]);
  }
  return values_[index];
}

double ProbabilityTable::total() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

ProbabilityTable ProbabilityTable::marginal(const NodeSet& keep) const {
  std::vector<std::string> vars;
  std::vector<int> cards;
  std::vector<std::size_t> out_stride(variables_.size(), 0);
  std::size_t out_size = 1;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (!keep.count(variables_[i])) continue;
    vars.push_back(variables_[i]);
    cards.push_back(cards_[i]);
    out_stride[i] = out_size;
    out_size *= static_cast<std::size_t>(cards_[i]);
  }
  std::vector<double> out(out_size, 0.0);
  std::vector<int> digit(variables_.size(), 0);
  std::size_t target = 0;
  for (double v : values_) {
    out[target] += v;
    for (std::size_t i = 0; i < digit.size(); ++i) {
      target += out_stride[i];
      if (++digit[i] < cards_[i]) break;
      target -= out_stride[i] * static_cast<std::size_t>(cards_[i]);
      digit[i] = 0;
    }
  }
  return ProbabilityTable(std::move(vars), std::move(cards), std::move(out));
}

DistributionSet::DistributionSet(std::map<std::string, int> cardinality, ProbabilityTable target)
    : cardinality_(std::move(cardinality)), target_(std::move(target)) {}

void DistributionSet::add_source(const Assignment& do_assignment, ProbabilityTable table) {
  sources_[do_assignment] = std::move(table);
}

const ProbabilityTable& DistributionSet::source(const Assignment& do_assignment) const {
  auto it = sources_.find(do_assignment);
  if (it != sources_.end()) return it->second;
  if (!provider_) {
    std::string key;
    for (const auto& [name, value] : do_assignment) {
      key += (key.empty() ? "" : ",") + name + "=" + std::to_string(value);
    }
    throw EvaluationError("no source table for do(" + key + ")");
  }
  return sources_.emplace(do_assignment, provider_(do_assignment)).first->second;
}

int DistributionSet::cardinality(const std::string& name) const {
  auto it = cardinality_.find(name);
  if (it == cardinality_.end()) throw EvaluationError("unknown variable " + name);
  return it->second;
}

}  // namespace ztransport
