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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "error.hpp"
#include "evaluate.hpp"

namespace ztransport {

namespace {

constexpr double kAtomFloor = 0.05;

std::vector<double> draw_simplex(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double floor = std::min(kAtomFloor, 0.5 / static_cast<double>(k));
  std::vector<double> u(k);
  for (double& x : u) x = unit(rng) + 1e-3;
  double sum = std::accumulate(u.begin(), u.end(), 0.0);
  double spread = 1.0 - floor * static_cast<double>(k);
  for (double& x : u) x = floor + spread * x / sum;
  return u;
}

std::size_t input_count(const DiscreteSCM& m, const DiscreteSCM::Mechanism& mech) {
  std::size_t n = 1;
  for (std::size_t p : mech.parents) n *= static_cast<std::size_t>(m.arity[p]);
  for (std::size_t l : mech.latents) n *= m.latents[l].p.size();
  return n;
}

// Every input column reaches every value, so with positive noise all
// conditionals and hence the joint are strictly positive.
void draw_mechanism(std::mt19937_64& rng, DiscreteSCM& m, std::size_t node) {
  DiscreteSCM::Mechanism& mech = m.mechanisms[node];
  const int a = m.arity[node];
  mech.noise = draw_simplex(rng, static_cast<std::size_t>(2 * a));
  std::size_t inputs = input_count(m, mech);
  std::uniform_int_distribution<int> value(0, a - 1);
  mech.table.clear();
  for (std::size_t in = 0; in < inputs; ++in) {
    std::vector<int> column(static_cast<std::size_t>(2 * a));
    std::iota(column.begin(), column.begin() + a, 0);
    for (std::size_t k = static_cast<std::size_t>(a); k < column.size(); ++k) column[k] = value(rng);
    std::shuffle(column.begin(), column.end(), rng);
    mech.table.insert(mech.table.end(), column.begin(), column.end());
  }
}

bool strictly_positive(const DiscreteSCM& m) {
  for (std::size_t i = 0; i < m.mechanisms.size(); ++i) {
    const auto& mech = m.mechanisms[i];
    std::size_t width = mech.noise.size();
    for (std::size_t start = 0; start < mech.table.size(); start += width) {
      std::vector<bool> seen(static_cast<std::size_t>(m.arity[i]), false);
      for (std::size_t k = 0; k < width; ++k) {
        if (mech.noise[k] > 0.0) seen[static_cast<std::size_t>(mech.table[start + k])] = true;
      }
      if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
    }
  }
  for (const auto& l : m.latents) {
    for (double p : l.p) {
      if (!(p > 0.0)) return false;
    }
  }
  return true;
}

DiscreteSCM draw_model(const SemiMarkovianGraph& g, std::mt19937_64& rng, int arity,
                       int latent_card) {
  DiscreteSCM m;
  m.graph = g;
  m.arity.assign(g.size(), arity);
  for (const Edge& e : g.bidirected_edges()) {
    m.latents.push_back({g.index_of(e.first), g.index_of(e.second),
                         draw_simplex(rng, static_cast<std::size_t>(latent_card))});
  }
  m.mechanisms.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    m.mechanisms[i].parents = g.parents(i);
    for (std::size_t l = 0; l < m.latents.size(); ++l) {
      if (m.latents[l].a == i || m.latents[l].b == i) m.mechanisms[i].latents.push_back(l);
    }
    draw_mechanism(rng, m, i);
  }
  return m;
}

void for_each_subset_assignment(const std::vector<std::string>& pool, const DiscreteSCM& m,
                                std::size_t n,
                                const std::function<void(const Assignment&)>& visit) {
  const std::size_t k = pool.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::string> chosen;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) chosen.push_back(pool[i]);
    }
    if (chosen.size() == n && n > 0) continue;
    std::vector<int> digits(chosen.size(), 0);
    while (true) {
      Assignment a;
      for (std::size_t i = 0; i < chosen.size(); ++i) a[chosen[i]] = digits[i];
      visit(a);
      std::size_t i = 0;
      for (; i < chosen.size(); ++i) {
        if (++digits[i] < m.arity[m.graph.index_of(chosen[i])]) break;
        digits[i] = 0;
      }
      if (i == chosen.size()) break;
    }
  }
}

std::map<std::string, int> cardinalities(const DiscreteSCM& m) {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < m.graph.size(); ++i) out[m.graph.nodes()[i]] = m.arity[i];
  return out;
}

void collect_term_slots(const ProbExpr& e, std::vector<ProbTerm>& out) {
  for (const ProbTerm& t : collect_terms(e)) out.push_back(t);
}

ProbExpr replace_term(const ProbExpr& e, int& index, int target, const ProbTerm& repl) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
      return e;
    case ProbExpr::Kind::kTerm:
      return index++ == target ? ProbExpr::term(repl) : e;
    case ProbExpr::Kind::kProduct: {
      std::vector<ProbExpr> fs;
      for (const ProbExpr& f : e.factors()) fs.push_back(replace_term(f, index, target, repl));
      return ProbExpr::product(std::move(fs));
    }
    case ProbExpr::Kind::kSum:
      return ProbExpr::sum(e.bound(), replace_term(e.body(), index, target, repl));
    case ProbExpr::Kind::kFraction: {
      ProbExpr num = replace_term(e.numerator(), index, target, repl);
      ProbExpr den = replace_term(e.denominator(), index, target, repl);
      return ProbExpr::fraction(std::move(num), std::move(den));
    }
  }
  return e;
}

}  // namespace

DiscreteModelPair generate_pair(const SelectionDiagram& d, std::uint64_t seed, int arity,
                                int latent_card) {
  if (d.graph.size() > kMaxOracleNodes) {
    throw InputError("oracle models are limited to " + std::to_string(kMaxOracleNodes) +
                     " nodes");
  }
  if (arity < 2) throw InputError("arity must be at least 2");
  if (latent_card <= 0) latent_card = arity * arity;
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    DiscreteModelPair pair;
    pair.s_targets = d.s_targets;
    pair.source = draw_model(d.graph, rng, arity, latent_card);
    pair.target = pair.source;
    for (const std::string& s : d.s_targets) {
      draw_mechanism(rng, pair.target, d.graph.index_of(s));
    }
    if (strictly_positive(pair.source) && strictly_positive(pair.target)) return pair;
  }
}

ProbabilityTable enumerate_joint(const DiscreteSCM& m, const Assignment& do_assignment) {
  const SemiMarkovianGraph& g = m.graph;
  const std::size_t n = g.size();
  std::vector<int> fixed(n, -1);
  for (const auto& [name, value] : do_assignment) {
    std::size_t i = g.index_of(name);
    if (value < 0 || value >= m.arity[i]) throw InputError("do value out of range for " + name);
    fixed[i] = value;
  }

  // cpt[i][input * arity + value], with the private noise summed out.
  std::vector<std::vector<double>> cpt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mech = m.mechanisms[i];
    const std::size_t width = mech.noise.size();
    const std::size_t inputs = mech.table.size() / width;
    cpt[i].assign(inputs * static_cast<std::size_t>(m.arity[i]), 0.0);
    for (std::size_t in = 0; in < inputs; ++in) {
      for (std::size_t k = 0; k < width; ++k) {
        cpt[i][in * static_cast<std::size_t>(m.arity[i]) +
               static_cast<std::size_t>(mech.table[in * width + k])] += mech.noise[k];
      }
    }
  }

  std::vector<std::string> vars;
  std::vector<int> cards;
  std::vector<std::size_t> stride(n, 0);
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i] >= 0) continue;
    vars.push_back(g.nodes()[i]);
    cards.push_back(m.arity[i]);
    stride[i] = size;
    size *= static_cast<std::size_t>(m.arity[i]);
  }
  std::vector<double> out(size, 0.0);

  const std::vector<std::size_t>& order = g.topological_indices();
  std::vector<int> value(n, 0);
  std::vector<std::size_t> latent_value(m.latents.size(), 0);

  auto input_of = [&](std::size_t i) {
    const auto& mech = m.mechanisms[i];
    std::size_t code = 0;
    std::size_t s = 1;
    for (std::size_t p : mech.parents) {
      code += s * static_cast<std::size_t>(value[p]);
      s *= static_cast<std::size_t>(m.arity[p]);
    }
    for (std::size_t l : mech.latents) {
      code += s * latent_value[l];
      s *= m.latents[l].p.size();
    }
    return code;
  };

  std::function<void(std::size_t, double, std::size_t)> descend = [&](std::size_t pos, double mass,
                                                                      std::size_t index) {
    if (pos == order.size()) {
      out[index] += mass;
      return;
    }
    const std::size_t i = order[pos];
    const std::size_t base = input_of(i) * static_cast<std::size_t>(m.arity[i]);
    if (fixed[i] >= 0) {
      value[i] = fixed[i];
      descend(pos + 1, mass, index);
      return;
    }
    for (int v = 0; v < m.arity[i]; ++v) {
      double p = cpt[i][base + static_cast<std::size_t>(v)];
      if (p == 0.0) continue;
      value[i] = v;
      descend(pos + 1, mass * p, index + stride[i] * static_cast<std::size_t>(v));
    }
  };

  while (true) {
    double mass = 1.0;
    for (std::size_t l = 0; l < m.latents.size(); ++l) mass *= m.latents[l].p[latent_value[l]];
    descend(0, mass, 0);
    std::size_t l = 0;
    for (; l < latent_value.size(); ++l) {
      if (++latent_value[l] < m.latents[l].p.size()) break;
      latent_value[l] = 0;
    }
    if (l == latent_value.size()) break;
  }
  return ProbabilityTable(std::move(vars), std::move(cards), std::move(out));
}

ProbabilityTable ground_truth_effect(const DiscreteSCM& m, const Assignment& x, const NodeSet& y) {
  for (const std::string& v : y) {
    if (x.count(v)) throw InputError("effect outcome " + v + " is also intervened on");
  }
  m.graph.require_subset(y, "effect outcome");
  return enumerate_joint(m, x).marginal(y);
}

DistributionSet build_distribution_set(const DiscreteModelPair& p, const NodeSet& z) {
  const DiscreteSCM& src = p.source;
  src.graph.require_subset(z, "controllable set");
  std::vector<std::string> pool(z.begin(), z.end());
  std::size_t full = 1;
  for (int a : src.arity) full *= static_cast<std::size_t>(a);
  std::size_t entries = full;  // target joint
  for_each_subset_assignment(pool, src, src.graph.size(), [&](const Assignment& a) {
    std::size_t t = 1;
    for (std::size_t i = 0; i < src.graph.size(); ++i) {
      if (!a.count(src.graph.nodes()[i])) t *= static_cast<std::size_t>(src.arity[i]);
    }
    entries += t;
    if (entries > kMaxTableEntries) throw InputError("distribution set exceeds the table budget");
  });
  DistributionSet set(cardinalities(src), enumerate_joint(p.target));
  for_each_subset_assignment(pool, src, src.graph.size(), [&](const Assignment& a) {
    set.add_source(a, enumerate_joint(src, a));
  });
  return set;
}

DistributionSet lazy_distribution_set(const DiscreteModelPair& p, const NodeSet& z) {
  p.source.graph.require_subset(z, "controllable set");
  DistributionSet set(cardinalities(p.source), enumerate_joint(p.target));
  DiscreteSCM src = p.source;
  set.set_provider([src, z](const Assignment& a) {
    if (!a.empty() && a.size() == src.graph.size()) {
      throw EvaluationError("experiments on every node are not available");
    }
    for (const auto& [name, value] : a) {
      if (!z.count(name)) throw EvaluationError("no experiments on non-controllable " + name);
    }
    return enumerate_joint(src, a);
  });
  return set;
}

double validate_formula(const ProbExpr& e, const DiscreteModelPair& p, const Query& q) {
  const DiscreteSCM& target = p.target;
  q.validate(target.graph);
  DistributionSet tables = lazy_distribution_set(p, q.z);
  FormulaEvaluator f(e, tables);
  target.graph.require_subset(f.free_variables(), "formula variable");

  std::vector<std::string> xs(q.x.begin(), q.x.end());
  std::vector<std::string> ys(q.y.begin(), q.y.end());
  NodeSet rest_set = set_difference(f.free_variables(), set_union(q.x, q.y));
  std::vector<std::string> rest(rest_set.begin(), rest_set.end());

  auto card = [&](const std::string& v) { return target.arity[target.graph.index_of(v)]; };
  auto odometer = [&](const std::vector<std::string>& vars, const std::function<void(Assignment&)>& visit) {
    std::vector<int> d(vars.size(), 0);
    while (true) {
      Assignment a;
      for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = d[i];
      visit(a);
      std::size_t i = 0;
      for (; i < vars.size(); ++i) {
        if (++d[i] < card(vars[i])) break;
        d[i] = 0;
      }
      if (i == vars.size()) return;
    }
  };

  double worst = 0.0;
  odometer(xs, [&](Assignment& xa) {
    ProbabilityTable truth = ground_truth_effect(target, xa, q.y);
    odometer(ys, [&](Assignment& ya) {
      const double want = truth.at(ya);
      odometer(rest, [&](Assignment& ra) {
        Assignment all = ra;
        all.insert(xa.begin(), xa.end());
        all.insert(ya.begin(), ya.end());
        double got = f(all);
        double err = std::isfinite(got) ? std::fabs(got - want) : INFINITY;
        worst = std::max(worst, err);
      });
    });
  });
  return worst;
}

std::vector<ProbExpr> single_term_mutations(const ProbExpr& e, const SemiMarkovianGraph& g,
                                            const NodeSet& z) {
  std::vector<ProbTerm> terms;
  collect_term_slots(e, terms);
  const NodeSet all = g.node_set();
  std::vector<ProbExpr> out;
  auto emit = [&](int index, const ProbTerm& t) {
    if (t == terms[static_cast<std::size_t>(index)]) return;
    int counter = 0;
    ProbExpr m = replace_term(e, counter, index, t);
    try {
      check_well_formed(m);
    } catch (const StructuralError&) {
      return;
    }
    out.push_back(std::move(m));
  };
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const ProbTerm& t = terms[i];
    const int idx = static_cast<int>(i);
    for (const std::string& c : t.conditioners) {
      ProbTerm m = t;
      m.conditioners.erase(c);
      emit(idx, m);
    }
    for (const std::string& v : all) {
      if (t.outcome.count(v) || t.conditioners.count(v) || t.interventions.count(v)) continue;
      ProbTerm m = t;
      m.conditioners.insert(v);
      emit(idx, m);
    }
    if (t.interventions.empty()) {
      ProbTerm m = t;
      m.domain = t.domain == Domain::kSource ? Domain::kTarget : Domain::kSource;
      emit(idx, m);
    }
    for (const std::string& v : t.interventions) {
      ProbTerm m = t;
      m.interventions.erase(v);
      emit(idx, m);
    }
    if (t.domain == Domain::kSource) {
      for (const std::string& v : z) {
        if (t.outcome.count(v) || t.conditioners.count(v) || t.interventions.count(v)) continue;
        ProbTerm m = t;
        m.interventions.insert(v);
        emit(idx, m);
      }
    }
  }
  return out;
}

}  // namespace ztransport
