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

#include "evaluate.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "error.hpp"

namespace ztransport {

namespace {

struct Marginals {
  std::vector<double> joint;
  std::vector<std::size_t> joint_stride;  // aligned with TermInfo::joint_ids
  std::vector<double> given;
  std::vector<std::size_t> given_stride;  // aligned with the given ids
};

struct TermInfo {
  Domain domain;
  std::vector<int> do_ids;
  std::vector<int> joint_ids;  // outcome first, then conditioners
  std::size_t outcome_count = 0;
  std::vector<std::shared_ptr<Marginals>> cache;
};

struct Node {
  ProbExpr::Kind kind;
  std::vector<int> children;
  std::vector<int> sum_ids;
  int term = -1;
};

// Strides of `ids` inside the marginal of `table` onto those ids.
std::pair<std::vector<double>, std::vector<std::size_t>> project(
    const ProbabilityTable& table, const std::vector<int>& ids,
    const std::vector<std::string>& names) {
  NodeSet keep;
  for (int id : ids) keep.insert(names[static_cast<std::size_t>(id)]);
  for (const std::string& n : keep) {
    if (std::find(table.variables().begin(), table.variables().end(), n) ==
        table.variables().end()) {
      throw EvaluationError("variable " + n + " is not covered by the referenced table");
    }
  }
  ProbabilityTable m = table.marginal(keep);
  std::vector<std::size_t> stride(ids.size(), 0);
  std::size_t s = 1;
  for (std::size_t k = 0; k < m.variables().size(); ++k) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (names[static_cast<std::size_t>(ids[i])] == m.variables()[k]) stride[i] = s;
    }
    s *= static_cast<std::size_t>(m.cards()[k]);
  }
  return {m.values(), stride};
}

}  // namespace

struct FormulaEvaluator::Impl {
  const DistributionSet& tables;
  std::map<std::string, int> ids;
  std::vector<std::string> names;
  std::vector<int> cards;
  std::vector<int> binding;
  std::vector<Node> nodes;
  std::vector<TermInfo> terms;
  int root = -1;

  explicit Impl(const DistributionSet& t) : tables(t) {}

  int id_of(const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(names.size());
    ids.emplace(name, id);
    names.push_back(name);
    cards.push_back(tables.cardinality(name));
    binding.push_back(-1);
    return id;
  }

  std::vector<int> ids_of(const NodeSet& s) {
    std::vector<int> out;
    for (const std::string& n : s) out.push_back(id_of(n));
    return out;
  }

  int compile(const ProbExpr& e) {
    Node node{e.kind(), {}, {}, -1};
    switch (e.kind()) {
      case ProbExpr::Kind::kOne:
        break;
      case ProbExpr::Kind::kTerm: {
        const ProbTerm& t = e.as_term();
        if (t.domain == Domain::kTarget && !t.interventions.empty()) {
          throw EvaluationError("no interventional tables exist for the target domain");
        }
        TermInfo info;
        info.domain = t.domain;
        info.do_ids = ids_of(t.interventions);
        info.joint_ids = ids_of(t.outcome);
        info.outcome_count = info.joint_ids.size();
        for (int id : ids_of(t.conditioners)) info.joint_ids.push_back(id);
        std::size_t combos = 1;
        for (int id : info.do_ids) combos *= static_cast<std::size_t>(cards[static_cast<std::size_t>(id)]);
        info.cache.resize(combos);
        node.term = static_cast<int>(terms.size());
        terms.push_back(std::move(info));
        break;
      }
      case ProbExpr::Kind::kProduct:
        for (const ProbExpr& f : e.factors()) node.children.push_back(compile(f));
        break;
      case ProbExpr::Kind::kSum:
        node.sum_ids = ids_of(e.bound());
        node.children.push_back(compile(e.body()));
        break;
      case ProbExpr::Kind::kFraction:
        node.children.push_back(compile(e.numerator()));
        node.children.push_back(compile(e.denominator()));
        break;
    }
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size()) - 1;
  }

  int value_of(int id) const {
    int v = binding[static_cast<std::size_t>(id)];
    if (v < 0) throw EvaluationError("variable " + names[static_cast<std::size_t>(id)] + " is unbound");
    return v;
  }

  const Marginals& marginals_for(TermInfo& t) {
    std::size_t code = 0;
    std::size_t stride = 1;
    for (int id : t.do_ids) {
      code += stride * static_cast<std::size_t>(value_of(id));
      stride *= static_cast<std::size_t>(cards[static_cast<std::size_t>(id)]);
    }
    std::shared_ptr<Marginals>& slot = t.cache[code];
    if (slot) return *slot;
    const ProbabilityTable* table = &tables.target();
    if (t.domain == Domain::kSource) {
      Assignment a;
      for (int id : t.do_ids) a[names[static_cast<std::size_t>(id)]] = value_of(id);
      table = &tables.source(a);
    }
    auto m = std::make_shared<Marginals>();
    std::tie(m->joint, m->joint_stride) = project(*table, t.joint_ids, names);
    std::vector<int> given(t.joint_ids.begin() + static_cast<std::ptrdiff_t>(t.outcome_count),
                           t.joint_ids.end());
    std::tie(m->given, m->given_stride) = project(*table, given, names);
    slot = std::move(m);
    return *slot;
  }

  double eval_term(TermInfo& t) {
    const Marginals& m = marginals_for(t);
    std::size_t j = 0;
    for (std::size_t i = 0; i < t.joint_ids.size(); ++i) {
      j += m.joint_stride[i] * static_cast<std::size_t>(value_of(t.joint_ids[i]));
    }
    std::size_t g = 0;
    for (std::size_t i = t.outcome_count; i < t.joint_ids.size(); ++i) {
      g += m.given_stride[i - t.outcome_count] * static_cast<std::size_t>(value_of(t.joint_ids[i]));
    }
    double den = m.given[g];
    if (den <= 0.0) throw EvaluationError("conditioning event has zero probability");
    return m.joint[j] / den;
  }

  double eval(int index) {
    Node& n = nodes[static_cast<std::size_t>(index)];
    switch (n.kind) {
      case ProbExpr::Kind::kOne:
        return 1.0;
      case ProbExpr::Kind::kTerm:
        return eval_term(terms[static_cast<std::size_t>(n.term)]);
      case ProbExpr::Kind::kProduct: {
        double p = 1.0;
        for (int c : n.children) {
          p *= eval(c);
          if (p == 0.0) break;
        }
        return p;
      }
      case ProbExpr::Kind::kSum: {
        std::vector<int> saved;
        for (int id : n.sum_ids) {
          saved.push_back(binding[static_cast<std::size_t>(id)]);
          binding[static_cast<std::size_t>(id)] = 0;
        }
        double total = 0.0;
        while (true) {
          total += eval(n.children.front());
          std::size_t k = 0;
          for (; k < n.sum_ids.size(); ++k) {
            int& v = binding[static_cast<std::size_t>(n.sum_ids[k])];
            if (++v < cards[static_cast<std::size_t>(n.sum_ids[k])]) break;
            v = 0;
          }
          if (k == n.sum_ids.size()) break;
        }
        for (std::size_t k = 0; k < n.sum_ids.size(); ++k) {
          binding[static_cast<std::size_t>(n.sum_ids[k])] = saved[k];
        }
        return total;
      }
      case ProbExpr::Kind::kFraction: {
        double den = eval(n.children[1]);
        if (den <= 0.0) throw EvaluationError("fraction with zero denominator");
        return eval(n.children[0]) / den;
      }
    }
    throw InternalError("unreachable expression kind");
  }
};

FormulaEvaluator::FormulaEvaluator(const ProbExpr& e, const DistributionSet& tables)
    : impl_(std::make_unique<Impl>(tables)), free_(e.free_variables()) {
  impl_->root = impl_->compile(e);
}

FormulaEvaluator::~FormulaEvaluator() = default;

double FormulaEvaluator::operator()(const Assignment& binding) {
  std::fill(impl_->binding.begin(), impl_->binding.end(), -1);
  for (const std::string& v : free_) {
    auto it = binding.find(v);
    if (it == binding.end()) throw EvaluationError("no value bound for " + v);
    int id = impl_->ids.at(v);
    if (it->second < 0 || it->second >= impl_->cards[static_cast<std::size_t>(id)]) {
      throw EvaluationError("value out of range for " + v);
    }
    impl_->binding[static_cast<std::size_t>(id)] = it->second;
  }
  return impl_->eval(impl_->root);
}

double evaluate(const ProbExpr& e, const DistributionSet& tables, const Assignment& binding) {
  FormulaEvaluator f(e, tables);
  return f(binding);
}

}  // namespace ztransport
