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

#include "identify.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "error.hpp"

namespace ztransport {

const char* WitnessKindName(Witness::Kind kind) {
  return kind == Witness::Kind::kHedge ? "hedge" : "s-hedge";
}

namespace {

struct FailSignal {
  SemiMarkovianGraph graph;
  SemiMarkovianGraph sub;
};

void collect_bound(const ProbExpr& e, NodeSet& out) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
    case ProbExpr::Kind::kTerm:
      return;
    case ProbExpr::Kind::kProduct:
      for (const ProbExpr& f : e.factors()) collect_bound(f, out);
      return;
    case ProbExpr::Kind::kSum:
      out.insert(e.bound().begin(), e.bound().end());
      collect_bound(e.body(), out);
      return;
    case ProbExpr::Kind::kFraction:
      collect_bound(e.numerator(), out);
      collect_bound(e.denominator(), out);
      return;
  }
}

// Sum over `over` of the product of `factors`. Factors free of the summed
// variables stay outside the sum. A variable that some factor binds
// internally is summed in a scope that excludes that factor, so no
// variable is bound twice along a path.
ProbExpr sum_product(NodeSet over, std::vector<ProbExpr> factors) {
  NodeSet free_all;
  for (const ProbExpr& f : factors) {
    NodeSet fv = f.free_variables();
    free_all.insert(fv.begin(), fv.end());
  }
  over = set_intersection(over, free_all);
  if (over.empty()) return ProbExpr::product(std::move(factors));

  std::vector<ProbExpr> outside;
  std::vector<ProbExpr> inside;
  NodeSet bound_inside;
  for (ProbExpr& f : factors) {
    if (set_intersection(f.free_variables(), over).empty()) {
      outside.push_back(std::move(f));
    } else {
      collect_bound(f, bound_inside);
      inside.push_back(std::move(f));
    }
  }
  NodeSet clash = set_intersection(over, bound_inside);
  if (clash.empty()) {
    outside.push_back(ProbExpr::sum(std::move(over), ProbExpr::product(std::move(inside))));
    return ProbExpr::product(std::move(outside));
  }
  NodeSet outer = set_difference(over, clash);
  if (outer.empty()) {
    // No scoping resolves the clash; leave the sum flat.
    outside.push_back(ProbExpr::sum(std::move(over), ProbExpr::product(std::move(inside))));
    return ProbExpr::product(std::move(outside));
  }
  std::string first = *outer.begin();
  NodeSet rest = over;
  rest.erase(first);
  outside.push_back(ProbExpr::sum({first}, sum_product(std::move(rest), std::move(inside))));
  return ProbExpr::product(std::move(outside));
}

struct Factor {
  std::string var;
  ProbExpr expr;
};

// A joint over `vars` given fixed context values. Either a labelled table
// (every conditional is a term) or a product of per-variable conditionals
// with some variables summed out.
class Dist {
 public:
  static Dist Table(DistLabel label, NodeSet vars) {
    Dist d;
    d.label_ = std::move(label);
    d.vars_ = std::move(vars);
    return d;
  }

  // prod over v in `members`, in the topological order of `g`, of
  // parent(v | pred(v) minus `exclude`).
  static Dist ProductOf(const Dist& parent, const SemiMarkovianGraph& g, const NodeSet& members,
                        const NodeSet& exclude) {
    Dist d;
    d.is_table_ = false;
    d.vars_ = members;
    for (std::size_t i : g.topological_indices()) {
      const std::string& v = g.nodes()[i];
      if (!members.count(v)) continue;
      d.factors_.push_back({v, parent.Cond(v, set_difference(g.predecessors(v), exclude))});
    }
    return d;
  }

  bool is_table() const { return is_table_; }

  void MarginalizeTo(const NodeSet& keep) {
    if (!is_table_) {
      NodeSet gone = set_difference(vars_, keep);
      summed_.insert(gone.begin(), gone.end());
    }
    vars_ = set_intersection(vars_, keep);
  }

  void Activate(const NodeSet& more) {
    if (more.empty()) return;
    if (!is_table_) throw InternalError("experiments activated on a product distribution");
    label_.do_set.insert(more.begin(), more.end());
  }

  ProbExpr Marginal(const NodeSet& y) const {
    if (is_table_) return ProbExpr::term(label_.domain, label_.do_set, y);
    return ProbExpr::product(Reduce(set_union(set_difference(vars_, y), summed_)));
  }

  ProbExpr Cond(const std::string& v, const NodeSet& given) const {
    if (is_table_) {
      return ProbExpr::term(label_.domain, label_.do_set, {v},
                            set_difference(given, label_.do_set));
    }
    NodeSet num_over = set_union(set_difference(vars_, set_union(given, {v})), summed_);
    NodeSet den_over = set_union(set_difference(vars_, given), summed_);
    std::vector<ProbExpr> num = Reduce(num_over);
    std::vector<ProbExpr> den = Reduce(den_over);
    for (auto d = den.begin(); d != den.end();) {
      auto match = std::find(num.begin(), num.end(), *d);
      if (match != num.end()) {
        num.erase(match);
        d = den.erase(d);
      } else {
        ++d;
      }
    }
    if (den.empty()) return ProbExpr::product(std::move(num));
    return ProbExpr::fraction(ProbExpr::product(std::move(num)),
                              ProbExpr::product(std::move(den)));
  }

 private:
  // Sum of the product of all factors over `over`, as a list of
  // multiplicands. A factor is a conditional normalized in its own
  // variable, so it sums to one when nothing else depends on that variable.
  std::vector<ProbExpr> Reduce(NodeSet over) const {
    std::vector<const Factor*> live;
    for (const Factor& f : factors_) live.push_back(&f);
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = live.begin(); it != live.end(); ++it) {
        const Factor* f = *it;
        if (!over.count(f->var)) continue;
        bool used = false;
        for (const Factor* other : live) {
          if (other != f && other->expr.free_variables().count(f->var)) {
            used = true;
            break;
          }
        }
        if (used) continue;
        over.erase(f->var);
        live.erase(it);
        changed = true;
        break;
      }
    }
    std::vector<ProbExpr> exprs;
    for (const Factor* f : live) exprs.push_back(f->expr);
    ProbExpr reduced = sum_product(std::move(over), std::move(exprs));
    if (reduced.kind() == ProbExpr::Kind::kProduct) return reduced.factors();
    if (reduced.is_one()) return {};
    return {reduced};
  }

  bool is_table_ = true;
  DistLabel label_;
  NodeSet vars_;
  std::vector<Factor> factors_;
  NodeSet summed_;
};

class Engine {
 public:
  Engine(std::size_t n, Trace* trace) : limit_(std::max<std::size_t>(4 * n, 4)), trace_(trace) {}

  ProbExpr Gid(const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& act,
               const NodeSet& dec, Dist p, const SemiMarkovianGraph& g, std::size_t depth) {
    Guard(depth);
    const NodeSet v = g.node_set();
    if (x.empty()) return p.Marginal(y);

    NodeSet an = ancestors(g, y);
    if (an != v) {
      p.MarginalizeTo(an);
      return Gid(y, set_intersection(x, an), set_intersection(z, an), set_intersection(act, an),
                 set_intersection(dec, an), std::move(p), induced_subgraph(g, an), depth + 1);
    }

    NodeSet fixed = set_union(set_union(x, act), dec);
    NodeSet w = set_difference(set_difference(v, fixed), ancestors(mutilate(g, fixed), y));
    NodeSet zw = set_intersection(z, set_union(x, w));
    if (!zw.empty() || !w.empty()) {
      if (trace_) ++trace_->activations;
      p.Activate(zw);
      return Gid(y, set_difference(set_union(x, w), zw), set_difference(z, zw),
                 set_union(act, zw), dec, std::move(p), mutilate(g, zw), depth + 1);
    }

    std::vector<CComponent> comps = c_components(induced_subgraph(g, set_difference(v, fixed)));
    if (trace_ && !trace_->gid_partition) {
      std::vector<NodeSet> parts;
      for (const CComponent& c : comps) parts.push_back(c.members);
      trace_->gid_partition = parts;
    }
    if (comps.size() > 1) {
      if (trace_) ++trace_->decompositions;
      std::vector<ProbExpr> factors;
      for (const CComponent& c : comps) {
        NodeSet outside = set_difference(v, c.members);
        NodeSet newly = set_intersection(z, outside);
        Dist sub = p;
        sub.Activate(newly);
        factors.push_back(Gid(c.members, set_difference(outside, z),
                              set_intersection(z, c.members), act, set_union(dec, newly),
                              std::move(sub), mutilate(g, newly), depth + 1));
      }
      return sum_product(set_difference(v, set_union(set_union(y, x), set_union(act, dec))),
                         std::move(factors));
    }
    if (comps.empty()) throw InternalError("empty decomposition with a non-empty outcome");

    NodeSet excl = set_union(act, dec);
    return Core(y, x, excl, p, g, comps.front().members,
                [&](const NodeSet& x2, Dist p2, const SemiMarkovianGraph& g2) {
                  // Experiments are never switched on against a product of
                  // conditionals, so the controllable set is spent here.
                  const NodeSet keep = g2.node_set();
                  return Gid(y, x2, {}, set_intersection(act, keep), set_intersection(dec, keep),
                             std::move(p2), g2, depth + 1);
                });
  }

  ProbExpr Bi(const NodeSet& y, const NodeSet& x, Dist p, const SemiMarkovianGraph& g,
              const NodeSet& act, std::size_t depth) {
    Guard(depth);
    const NodeSet v = g.node_set();
    if (x.empty()) return p.Marginal(y);

    NodeSet an = ancestors(g, y);
    if (an != v) {
      p.MarginalizeTo(an);
      return Bi(y, set_intersection(x, an), std::move(p), induced_subgraph(g, an),
                set_intersection(act, an), depth + 1);
    }

    std::vector<CComponent> comps =
        c_components(induced_subgraph(g, set_difference(v, set_union(x, act))));
    if (comps.size() != 1) throw InternalError("c-factor outcome is not a single c-component");

    return Core(y, x, act, p, g, comps.front().members,
                [&](const NodeSet& x2, Dist p2, const SemiMarkovianGraph& g2) {
                  return Bi(y, x2, std::move(p2), g2, set_intersection(act, g2.node_set()),
                            depth + 1);
                });
  }

  ProbExpr Sid(const NodeSet& y, const NodeSet& x, const SelectionDiagram& d,
               const SemiMarkovianGraph& g, const NodeSet& z, std::size_t depth,
               Witness* failure) {
    Guard(depth);
    const NodeSet v = g.node_set();
    if (x.empty()) return ProbExpr::term(Domain::kTarget, {}, y);

    NodeSet an = ancestors(g, y);
    if (an != v) {
      return Sid(y, set_intersection(x, an), d, induced_subgraph(g, an), set_intersection(z, an),
                 depth + 1, failure);
    }

    NodeSet w = set_difference(set_difference(v, x), ancestors(mutilate(g, x), y));
    if (!w.empty()) return Sid(y, set_union(x, w), d, g, z, depth + 1, failure);

    std::vector<CComponent> comps = c_components(induced_subgraph(g, set_difference(v, x)));
    if (trace_ && !trace_->sid_partition) {
      std::vector<NodeSet> parts;
      for (const CComponent& c : comps) parts.push_back(c.members);
      trace_->sid_partition = parts;
    }
    std::vector<ProbExpr> factors;
    for (const CComponent& c : comps) {
      NodeSet outside = set_difference(v, c.members);
      try {
        if (direct_transportable(c, d)) {
          NodeSet act = set_intersection(z, outside);
          DistLabel label{Domain::kSource, act};
          factors.push_back(Bi(c.members, set_difference(outside, z), Dist::Table(label, v),
                               mutilate(g, act), act, depth + 1));
        } else {
          factors.push_back(Bi(c.members, outside, Dist::Table({Domain::kTarget, {}}, v), g, {},
                               depth + 1));
        }
      } catch (const FailSignal& fail) {
        failure->f_graph = fail.graph;
        failure->f_sub = fail.sub;
        failure->s_targets_in_component = set_intersection(d.s_targets, c.members);
        failure->kind = failure->s_targets_in_component.empty() ? Witness::Kind::kHedge
                                                                : Witness::Kind::kSHedge;
        throw;
      }
    }
    return sum_product(set_difference(v, set_union(y, x)), std::move(factors));
  }

 private:
  using Recurse = std::function<ProbExpr(const NodeSet&, Dist, const SemiMarkovianGraph&)>;

  // Single c-component identification shared by gid_z and bi.
  ProbExpr Core(const NodeSet& y, const NodeSet& x, const NodeSet& excl, const Dist& p,
                const SemiMarkovianGraph& g, const NodeSet& c, const Recurse& recurse) {
    std::vector<CComponent> whole = c_components(g);
    if (whole.size() == 1) throw FailSignal{g, induced_subgraph(g, c)};

    for (const CComponent& comp : whole) {
      if (comp.members == c) {
        std::vector<ProbExpr> factors;
        for (std::size_t i : g.topological_indices()) {
          const std::string& vi = g.nodes()[i];
          if (!c.count(vi)) continue;
          factors.push_back(p.Cond(vi, set_difference(g.predecessors(vi), excl)));
        }
        return sum_product(set_difference(c, y), std::move(factors));
      }
    }
    for (const CComponent& comp : whole) {
      if (is_subset(c, comp.members)) {
        Dist next = Dist::ProductOf(p, g, comp.members, excl);
        return recurse(set_intersection(x, comp.members), std::move(next),
                       induced_subgraph(g, comp.members));
      }
    }
    throw InternalError("c-component " + format_set(c) + " is not contained in any component");
  }

  void Guard(std::size_t depth) const {
    if (depth > limit_) throw InternalError("identification recursion exceeded its depth bound");
  }

  std::size_t limit_;
  Trace* trace_;
};

// Drops z-members from y with a warning; returns the trimmed set.
NodeSet trim_controllable(const NodeSet& y, const NodeSet& z, std::vector<std::string>& warnings) {
  NodeSet overlap = set_intersection(z, y);
  if (!overlap.empty()) {
    warnings.push_back("dropped outcome variables " + format_set(overlap) +
                       " from the controllable set");
  }
  return set_difference(z, overlap);
}

void check_query(const SemiMarkovianGraph& g, const NodeSet& y, const NodeSet& x,
                 const NodeSet& z) {
  Query{x, y, z}.validate(g);
}

}  // namespace

IdentResult gid_z(const NodeSet& y, const NodeSet& x, const NodeSet& z, const IdentContext& ctx,
                  const DistLabel& dist, const SemiMarkovianGraph& g, Trace* trace) {
  check_query(g, y, x, z);
  g.require_subset(ctx.active_line3, "active experiments");
  g.require_subset(ctx.active_decomp, "active experiments");
  if (dist.domain != Domain::kSource) throw InputError("gid_z works on source distributions");
  std::vector<std::string> warnings;
  NodeSet zz = trim_controllable(y, z, warnings);
  NodeSet active = set_union(ctx.active_line3, ctx.active_decomp);
  if (!set_intersection(active, y).empty()) {
    throw InputError("active experiments overlap the outcome set");
  }
  DistLabel label = dist;
  label.do_set.insert(active.begin(), active.end());

  Engine engine(g.size(), trace);
  try {
    ProbExpr f = engine.Gid(y, x, zz, ctx.active_line3, ctx.active_decomp,
                            Dist::Table(label, g.node_set()), mutilate(g, active), 0);
    IdentResult r(normalize(f));
    r.warnings = std::move(warnings);
    return r;
  } catch (const FailSignal& fail) {
    IdentResult r(Witness{Witness::Kind::kHedge, fail.graph, fail.sub, {}});
    r.warnings = std::move(warnings);
    return r;
  }
}

IdentResult gid_z(const SemiMarkovianGraph& g, const Query& q, Trace* trace) {
  return gid_z(q.y, q.x, q.z, {}, {}, g, trace);
}

IdentResult bi(const NodeSet& y, const NodeSet& x, const DistLabel& dist,
               const SemiMarkovianGraph& g, const NodeSet& active) {
  check_query(g, y, x, active);
  Engine engine(g.size(), nullptr);
  try {
    return IdentResult(
        normalize(engine.Bi(y, x, Dist::Table(dist, g.node_set()), g, active, 0)));
  } catch (const FailSignal& fail) {
    return IdentResult(Witness{Witness::Kind::kHedge, fail.graph, fail.sub, {}});
  }
}

IdentResult sid_z(const NodeSet& y, const NodeSet& x, const SelectionDiagram& d, const NodeSet& z,
                  Trace* trace) {
  check_query(d.graph, y, x, z);
  std::vector<std::string> warnings;
  NodeSet zz = trim_controllable(y, z, warnings);
  Engine engine(d.graph.size(), trace);
  Witness failure;
  try {
    IdentResult r(normalize(engine.Sid(y, x, d, d.graph, zz, 0, &failure)));
    r.warnings = std::move(warnings);
    return r;
  } catch (const FailSignal&) {
    IdentResult r(std::move(failure));
    r.warnings = std::move(warnings);
    return r;
  }
}

bool direct_transportable(const CComponent& c, const SelectionDiagram& d) {
  return set_intersection(d.s_targets, c.members).empty();
}

IdentResult transportable(const NodeSet& y, const NodeSet& x, const SelectionDiagram& d) {
  IdentResult r = sid_z(y, x, d, set_difference(d.graph.node_set(), y));
  r.warnings.clear();
  return r;
}

}  // namespace ztransport
