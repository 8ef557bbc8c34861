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

#include "expr.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <variant>

#include "error.hpp"

namespace ztransport {

namespace {

struct OneRep {};
struct ProductRep {
  std::vector<ProbExpr> factors;
};
struct SumRep {
  NodeSet over;
  ProbExpr body;
};
struct FractionRep {
  ProbExpr numerator;
  ProbExpr denominator;
};

}  // namespace

struct ProbExpr::Rep {
  std::variant<OneRep, ProbTerm, ProductRep, SumRep, FractionRep> node;
};

ProbExpr::ProbExpr() : rep_(std::make_shared<const Rep>(Rep{OneRep{}})) {}

ProbExpr::ProbExpr(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

ProbExpr ProbExpr::term(ProbTerm t) {
  return ProbExpr(std::make_shared<const Rep>(Rep{std::move(t)}));
}

ProbExpr ProbExpr::term(Domain domain, NodeSet interventions, NodeSet outcome,
                        NodeSet conditioners) {
  return term(ProbTerm{domain, std::move(interventions), std::move(outcome),
                       std::move(conditioners)});
}

ProbExpr ProbExpr::product(std::vector<ProbExpr> factors) {
  return ProbExpr(std::make_shared<const Rep>(Rep{ProductRep{std::move(factors)}}));
}

ProbExpr ProbExpr::sum(NodeSet over, ProbExpr body) {
  return ProbExpr(std::make_shared<const Rep>(Rep{SumRep{std::move(over), std::move(body)}}));
}

ProbExpr ProbExpr::fraction(ProbExpr numerator, ProbExpr denominator) {
  return ProbExpr(std::make_shared<const Rep>(
      Rep{FractionRep{std::move(numerator), std::move(denominator)}}));
}

ProbExpr::Kind ProbExpr::kind() const {
  return static_cast<Kind>(rep_->node.index());
}

const ProbTerm& ProbExpr::as_term() const {
  if (auto* t = std::get_if<ProbTerm>(&rep_->node)) return *t;
  throw InternalError("expression is not a term");
}

const std::vector<ProbExpr>& ProbExpr::factors() const {
  if (auto* p = std::get_if<ProductRep>(&rep_->node)) return p->factors;
  throw InternalError("expression is not a product");
}

const NodeSet& ProbExpr::bound() const {
  if (auto* s = std::get_if<SumRep>(&rep_->node)) return s->over;
  throw InternalError("expression is not a sum");
}

const ProbExpr& ProbExpr::body() const {
  if (auto* s = std::get_if<SumRep>(&rep_->node)) return s->body;
  throw InternalError("expression is not a sum");
}

const ProbExpr& ProbExpr::numerator() const {
  if (auto* f = std::get_if<FractionRep>(&rep_->node)) return f->numerator;
  throw InternalError("expression is not a fraction");
}

const ProbExpr& ProbExpr::denominator() const {
  if (auto* f = std::get_if<FractionRep>(&rep_->node)) return f->denominator;
  throw InternalError("expression is not a fraction");
}

NodeSet ProbExpr::free_variables() const {
  switch (kind()) {
    case Kind::kOne:
      return {};
    case Kind::kTerm: {
      const ProbTerm& t = as_term();
      return set_union(set_union(t.interventions, t.outcome), t.conditioners);
    }
    case Kind::kProduct: {
      NodeSet out;
      for (const ProbExpr& f : factors()) {
        NodeSet fv = f.free_variables();
        out.insert(fv.begin(), fv.end());
      }
      return out;
    }
    case Kind::kSum:
      return set_difference(body().free_variables(), bound());
    case Kind::kFraction:
      return set_union(numerator().free_variables(), denominator().free_variables());
  }
  throw InternalError("unreachable expression kind");
}

bool operator==(const ProbExpr& a, const ProbExpr& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ProbExpr::Kind::kOne:
      return true;
    case ProbExpr::Kind::kTerm:
      return a.as_term() == b.as_term();
    case ProbExpr::Kind::kProduct:
      return a.factors() == b.factors();
    case ProbExpr::Kind::kSum:
      return a.bound() == b.bound() && a.body() == b.body();
    case ProbExpr::Kind::kFraction:
      return a.numerator() == b.numerator() && a.denominator() == b.denominator();
  }
  return false;
}

namespace {

void check_term(const ProbTerm& t) {
  if (t.outcome.empty()) throw StructuralError("term with empty outcome");
  if (!set_intersection(t.outcome, t.conditioners).empty()) {
    throw StructuralError("term outcome and conditioners overlap");
  }
  if (!set_intersection(t.interventions, set_union(t.outcome, t.conditioners)).empty()) {
    throw StructuralError("term do-set overlaps its outcome or conditioners");
  }
  if (t.domain == Domain::kTarget && !t.interventions.empty()) {
    throw StructuralError("target-domain term carries interventions");
  }
}

void check_rec(const ProbExpr& e, const NodeSet& enclosing) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
      return;
    case ProbExpr::Kind::kTerm:
      check_term(e.as_term());
      return;
    case ProbExpr::Kind::kProduct:
      for (const ProbExpr& f : e.factors()) check_rec(f, enclosing);
      return;
    case ProbExpr::Kind::kSum: {
      NodeSet body_free = e.body().free_variables();
      for (const std::string& v : e.bound()) {
        if (enclosing.count(v)) throw StructuralError("variable '" + v + "' bound twice");
        if (!body_free.count(v)) {
          throw StructuralError("sum over '" + v + "' which is not free in its body");
        }
      }
      check_rec(e.body(), set_union(enclosing, e.bound()));
      return;
    }
    case ProbExpr::Kind::kFraction:
      check_rec(e.numerator(), enclosing);
      check_rec(e.denominator(), enclosing);
      return;
  }
}

int kind_rank(ProbExpr::Kind k) {
  switch (k) {
    case ProbExpr::Kind::kTerm:
      return 0;
    case ProbExpr::Kind::kSum:
      return 1;
    case ProbExpr::Kind::kFraction:
      return 2;
    case ProbExpr::Kind::kProduct:
      return 3;
    case ProbExpr::Kind::kOne:
      return 4;
  }
  return 5;
}

ProbExpr make_product(std::vector<ProbExpr> factors) {
  std::vector<ProbExpr> flat;
  for (ProbExpr& f : factors) {
    if (f.kind() == ProbExpr::Kind::kProduct) {
      flat.insert(flat.end(), f.factors().begin(), f.factors().end());
    } else if (!f.is_one()) {
      flat.push_back(std::move(f));
    }
  }
  // Chain rule: P_d(a|B) P_d(c|a,B) = P_d(a,c|B) for a shared domain and do-set.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < flat.size() && !merged; ++i) {
      if (flat[i].kind() != ProbExpr::Kind::kTerm) continue;
      const ProbTerm& a = flat[i].as_term();
      for (std::size_t j = 0; j < flat.size() && !merged; ++j) {
        if (j == i || flat[j].kind() != ProbExpr::Kind::kTerm) continue;
        const ProbTerm& c = flat[j].as_term();
        if (a.domain != c.domain || a.interventions != c.interventions) continue;
        if (c.conditioners != set_union(a.outcome, a.conditioners)) continue;
        ProbTerm joint{a.domain, a.interventions, set_union(a.outcome, c.outcome), a.conditioners};
        flat[i] = ProbExpr::term(std::move(joint));
        flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
    }
  }
  if (flat.empty()) return ProbExpr::one();
  if (flat.size() == 1) return flat.front();
  std::sort(flat.begin(), flat.end(), canonical_less);
  return ProbExpr::product(std::move(flat));
}

// `held` holds variables bound by enclosing sums. A rewrite may not remove
// the last free occurrence of one of them: the enclosing sum would then
// range over a variable its body ignores and lose a cardinality factor.
ProbExpr normalize_rec(const ProbExpr& e, const NodeSet& held) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
    case ProbExpr::Kind::kTerm:
      return e;
    case ProbExpr::Kind::kProduct: {
      std::vector<ProbExpr> parts;
      for (const ProbExpr& f : e.factors()) parts.push_back(normalize_rec(f, held));
      return make_product(std::move(parts));
    }
    case ProbExpr::Kind::kSum: {
      NodeSet over = e.bound();
      ProbExpr body = normalize_rec(e.body(), set_union(held, over));
      while (body.kind() == ProbExpr::Kind::kSum) {
        over.insert(body.bound().begin(), body.bound().end());
        body = body.body();
      }
      std::vector<ProbExpr> parts;
      if (body.kind() == ProbExpr::Kind::kProduct) {
        parts = body.factors();
      } else {
        parts.push_back(body);
      }
      // Sum out a variable that lives only in one term's outcome.
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto it = over.begin(); it != over.end(); ++it) {
          const std::string& v = *it;
          int holder = -1;
          int count = 0;
          for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].free_variables().count(v)) {
              ++count;
              holder = static_cast<int>(i);
            }
          }
          if (count != 1) continue;
          const ProbExpr& h = parts[static_cast<std::size_t>(holder)];
          if (h.kind() != ProbExpr::Kind::kTerm || !h.as_term().outcome.count(v)) continue;
          ProbTerm t = h.as_term();
          t.outcome.erase(v);
          std::vector<ProbExpr> next = parts;
          next[static_cast<std::size_t>(holder)] =
              t.outcome.empty() ? ProbExpr::one() : ProbExpr::term(std::move(t));
          NodeSet rest = over;
          rest.erase(v);
          const NodeSet must = set_intersection(set_union(held, rest), make_product(parts).free_variables());
          if (!is_subset(must, make_product(next).free_variables())) continue;
          ProbExpr merged = make_product(std::move(next));
          parts = merged.kind() == ProbExpr::Kind::kProduct ? merged.factors() : std::vector<ProbExpr>{merged};
          over = std::move(rest);
          changed = true;
          break;
        }
      }
      body = make_product(std::move(parts));
      over = set_intersection(over, body.free_variables());
      if (over.empty()) return body;
      return ProbExpr::sum(std::move(over), std::move(body));
    }
    case ProbExpr::Kind::kFraction: {
      ProbExpr num = normalize_rec(e.numerator(), held);
      ProbExpr den = normalize_rec(e.denominator(), held);
      if (den.is_one()) return num;
      if (num == den && set_intersection(held, num.free_variables()).empty()) return ProbExpr::one();
      return ProbExpr::fraction(std::move(num), std::move(den));
    }
  }
  throw InternalError("unreachable expression kind");
}

std::string join(const NodeSet& s, const std::string& sep, bool lower) {
  std::string out;
  bool first = true;
  for (const std::string& v : s) {
    if (!first) out += sep;
    first = false;
    if (lower) {
      for (char c : v) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += v;
    }
  }
  return out;
}

// z1 -> z_{1} for LaTeX subscripts.
std::string latex_slot(const std::string& name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::size_t split = lower.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(lower[split - 1]))) --split;
  std::string out;
  for (char c : lower.substr(0, split)) {
    if (c == '_') {
      out += "\\_";
    } else {
      out += c;
    }
  }
  if (split < lower.size() && split > 0) out += "_{" + lower.substr(split) + "}";
  return out;
}

std::string latex_join(const NodeSet& s) {
  std::string out;
  bool first = true;
  for (const std::string& v : s) {
    if (!first) out += ", ";
    first = false;
    out += latex_slot(v);
  }
  return out;
}

std::string render_text(const ProbExpr& e) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
      return "1";
    case ProbExpr::Kind::kTerm: {
      const ProbTerm& t = e.as_term();
      std::string out = t.domain == Domain::kTarget ? "P*" : "P";
      if (!t.interventions.empty()) out += "_{" + join(t.interventions, ",", true) + "}";
      out += "(" + join(t.outcome, ",", true);
      if (!t.conditioners.empty()) out += "|" + join(t.conditioners, ",", true);
      return out + ")";
    }
    case ProbExpr::Kind::kProduct: {
      std::string out;
      for (const ProbExpr& f : e.factors()) {
        if (!out.empty()) out += " ";
        if (f.kind() == ProbExpr::Kind::kSum) {
          out += "[" + render_text(f) + "]";
        } else {
          out += render_text(f);
        }
      }
      return out;
    }
    case ProbExpr::Kind::kSum:
      return "sum_{" + join(e.bound(), ",", true) + "} " + render_text(e.body());
    case ProbExpr::Kind::kFraction:
      return "(" + render_text(e.numerator()) + ") / (" + render_text(e.denominator()) + ")";
  }
  return {};
}

std::string render_latex(const ProbExpr& e) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
      return "1";
    case ProbExpr::Kind::kTerm: {
      const ProbTerm& t = e.as_term();
      std::string out = t.domain == Domain::kTarget ? "P^{*}" : "P";
      if (!t.interventions.empty()) out += "_{" + latex_join(t.interventions) + "}";
      out += "(" + latex_join(t.outcome);
      if (!t.conditioners.empty()) out += " \\mid " + latex_join(t.conditioners);
      return out + ")";
    }
    case ProbExpr::Kind::kProduct: {
      std::string out;
      for (const ProbExpr& f : e.factors()) {
        if (!out.empty()) out += " ";
        if (f.kind() == ProbExpr::Kind::kSum) {
          out += "\\left[" + render_latex(f) + "\\right]";
        } else {
          out += render_latex(f);
        }
      }
      return out;
    }
    case ProbExpr::Kind::kSum:
      return "\\sum_{" + latex_join(e.bound()) + "} " + render_latex(e.body());
    case ProbExpr::Kind::kFraction:
      return "\\frac{" + render_latex(e.numerator()) + "}{" + render_latex(e.denominator()) + "}";
  }
  return {};
}

nlohmann::json set_to_json(const NodeSet& s) {
  return nlohmann::json(std::vector<std::string>(s.begin(), s.end()));
}

NodeSet set_from_json(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) {
    throw StructuralError(std::string("expression field '") + field + "' must be an array");
  }
  NodeSet out;
  for (const auto& v : j.at(field)) {
    if (!v.is_string() || !IsValidNodeName(v.get<std::string>())) {
      throw StructuralError(std::string("expression field '") + field + "' holds a bad name");
    }
    if (!out.insert(v.get<std::string>()).second) {
      throw StructuralError(std::string("expression field '") + field + "' repeats a name");
    }
  }
  return out;
}

const nlohmann::json& object_field(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_object()) {
    throw StructuralError(std::string("expression field '") + field + "' must be an object");
  }
  return j.at(field);
}

void collect_terms_rec(const ProbExpr& e, std::vector<ProbTerm>& out) {
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
      return;
    case ProbExpr::Kind::kTerm:
      out.push_back(e.as_term());
      return;
    case ProbExpr::Kind::kProduct:
      for (const ProbExpr& f : e.factors()) collect_terms_rec(f, out);
      return;
    case ProbExpr::Kind::kSum:
      collect_terms_rec(e.body(), out);
      return;
    case ProbExpr::Kind::kFraction:
      collect_terms_rec(e.numerator(), out);
      collect_terms_rec(e.denominator(), out);
      return;
  }
}

}  // namespace

void check_well_formed(const ProbExpr& e) { check_rec(e, {}); }

ProbExpr normalize(const ProbExpr& e) {
  check_well_formed(e);
  return normalize_rec(e, {});
}

bool canonical_less(const ProbExpr& a, const ProbExpr& b) {
  int ra = kind_rank(a.kind());
  int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb;
  if (a.kind() == ProbExpr::Kind::kTerm) {
    const ProbTerm& x = a.as_term();
    const ProbTerm& y = b.as_term();
    return std::tie(x.domain, x.interventions, x.outcome, x.conditioners) <
           std::tie(y.domain, y.interventions, y.outcome, y.conditioners);
  }
  return to_json(a).dump() < to_json(b).dump();
}

std::string render(const ProbExpr& e, RenderFormat format) {
  switch (format) {
    case RenderFormat::kText:
      return render_text(e);
    case RenderFormat::kLatex:
      return render_latex(e);
    case RenderFormat::kJson:
      return to_json(e).dump();
  }
  return {};
}

nlohmann::json to_json(const ProbExpr& e) {
  using nlohmann::json;
  switch (e.kind()) {
    case ProbExpr::Kind::kOne:
      return json{{"kind", "one"}};
    case ProbExpr::Kind::kTerm: {
      const ProbTerm& t = e.as_term();
      return json{{"kind", "term"},
                  {"domain", t.domain == Domain::kSource ? "source" : "target"},
                  {"do", set_to_json(t.interventions)},
                  {"outcome", set_to_json(t.outcome)},
                  {"given", set_to_json(t.conditioners)}};
    }
    case ProbExpr::Kind::kProduct: {
      json factors = json::array();
      for (const ProbExpr& f : e.factors()) factors.push_back(to_json(f));
      return json{{"kind", "product"}, {"factors", factors}};
    }
    case ProbExpr::Kind::kSum:
      return json{{"kind", "sum"}, {"over", set_to_json(e.bound())}, {"body", to_json(e.body())}};
    case ProbExpr::Kind::kFraction:
      return json{{"kind", "fraction"},
                  {"numerator", to_json(e.numerator())},
                  {"denominator", to_json(e.denominator())}};
  }
  return {};
}

ProbExpr from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw StructuralError("expression node must be an object with a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "one") return ProbExpr::one();
  if (kind == "term") {
    if (!j.contains("domain") || !j.at("domain").is_string()) {
      throw StructuralError("term needs a 'domain'");
    }
    const std::string domain = j.at("domain").get<std::string>();
    if (domain != "source" && domain != "target") {
      throw StructuralError("unknown term domain '" + domain + "'");
    }
    ProbTerm t{domain == "source" ? Domain::kSource : Domain::kTarget, set_from_json(j, "do"),
               set_from_json(j, "outcome"), set_from_json(j, "given")};
    check_term(t);
    return ProbExpr::term(std::move(t));
  }
  if (kind == "product") {
    if (!j.contains("factors") || !j.at("factors").is_array()) {
      throw StructuralError("product needs a 'factors' array");
    }
    std::vector<ProbExpr> factors;
    for (const auto& f : j.at("factors")) factors.push_back(from_json(f));
    return ProbExpr::product(std::move(factors));
  }
  if (kind == "sum") {
    return ProbExpr::sum(set_from_json(j, "over"), from_json(object_field(j, "body")));
  }
  if (kind == "fraction") {
    return ProbExpr::fraction(from_json(object_field(j, "numerator")),
                              from_json(object_field(j, "denominator")));
  }
  throw StructuralError("unknown expression kind '" + kind + "'");
}

bool has_transport_shape(const ProbExpr& e, const NodeSet& controllable) {
  for (const ProbTerm& t : collect_terms(e)) {
    if (t.domain == Domain::kTarget && !t.interventions.empty()) return false;
    if (t.domain == Domain::kSource && !is_subset(t.interventions, controllable)) return false;
  }
  return true;
}

std::vector<ProbTerm> collect_terms(const ProbExpr& e) {
  std::vector<ProbTerm> out;
  collect_terms_rec(e, out);
  return out;
}

}  // namespace ztransport
