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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "identify.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace ztransport {
namespace {

constexpr double kTol = 1e-9;

QueryFile Golden(const std::string& name) {
  return testing::load_query_file(std::string(ZT_TEST_DATA_DIR) + "/" + name + ".zq");
}

TEST(Oracle, DeterministicInSeed) {
  QueryFile qf = Golden("covariate");
  DiscreteModelPair a = generate_pair(qf.diagram, 7);
  DiscreteModelPair b = generate_pair(qf.diagram, 7);
  DiscreteModelPair c = generate_pair(qf.diagram, 8);
  EXPECT_EQ(enumerate_joint(a.target).values(), enumerate_joint(b.target).values());
  EXPECT_NE(enumerate_joint(a.target).values(), enumerate_joint(c.target).values());
}

TEST(Oracle, LatentsBoundedAwayFromZero) {
  QueryFile qf = Golden("two_experiments");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DiscreteModelPair p = generate_pair(qf.diagram, seed);
    ASSERT_EQ(p.source.latents.size(), qf.diagram.graph.bidirected_edges().size());
    for (const auto& l : p.source.latents) {
      EXPECT_EQ(l.p.size(), 4u);
      EXPECT_GE(*std::min_element(l.p.begin(), l.p.end()), 0.05);
    }
  }
}

TEST(Oracle, TablesAreStrictlyPositiveDistributions) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    testing::RandomCase c = testing::random_case(seed);
    DiscreteModelPair p = generate_pair(c.diagram, seed, 2 + static_cast<int>(seed % 2));
    for (const DiscreteSCM* m : {&p.source, &p.target}) {
      ProbabilityTable j = enumerate_joint(*m);
      EXPECT_NEAR(j.total(), 1.0, kTol);
      EXPECT_GT(*std::min_element(j.values().begin(), j.values().end()), 0.0) << "seed " << seed;
      Assignment x{{c.diagram.graph.nodes().front(), 1}};
      EXPECT_NEAR(enumerate_joint(*m, x).total(), 1.0, kTol);
    }
  }
}

TEST(Oracle, NoSelectionMeansIdenticalDomains) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    testing::RandomCase c = testing::random_case(seed);
    SelectionDiagram d(c.diagram.graph, {});
    DiscreteModelPair p = generate_pair(d, seed);
    EXPECT_EQ(enumerate_joint(p.source).values(), enumerate_joint(p.target).values());
  }
}

TEST(Oracle, SelectionChangesOnlyPointedMechanisms) {
  QueryFile qf = Golden("covariate");
  DiscreteModelPair p = generate_pair(qf.diagram, 3);
  const auto& g = qf.diagram.graph;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool pointed = qf.diagram.s_targets.count(g.nodes()[i]) > 0;
    EXPECT_EQ(p.source.mechanisms[i].table == p.target.mechanisms[i].table &&
                  p.source.mechanisms[i].noise == p.target.mechanisms[i].noise,
              !pointed)
        << g.nodes()[i];
  }
}

TEST(Oracle, InterventionsMatchTruncatedFactorization) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    std::mt19937_64 rng(seed);
    testing::RandomDiagramOptions opt;
    opt.max_nodes = 6;
    opt.max_bidirected = 0;
    SelectionDiagram d(testing::random_graph(rng, opt), {});
    DiscreteModelPair p = generate_pair(d, seed);
    const auto& nodes = d.graph.nodes();
    Assignment x{{nodes[seed % nodes.size()], static_cast<int>(seed % 2)}};
    if (seed % 3 == 0 && nodes.size() > 2) x[nodes[(seed + 1) % nodes.size()]] = 1;
    ProbabilityTable a = enumerate_joint(p.source, x);
    ProbabilityTable b = testing::truncated_factorization(p.source, x);
    ASSERT_EQ(a.variables(), b.variables());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], kTol);
    ++checked;
  }
  EXPECT_EQ(checked, 150);
}

TEST(Oracle, GroundTruthEffectIsMarginalOfSubmodel) {
  QueryFile qf = Golden("covariate");
  DiscreteModelPair p = generate_pair(qf.diagram, 5);
  ProbabilityTable joint = enumerate_joint(p.target, {{"X", 1}});
  ProbabilityTable eff = ground_truth_effect(p.target, {{"X", 1}}, {"Y"});
  EXPECT_NEAR(eff.at({{"Y", 0}}), joint.marginal({"Y"}).at({{"Y", 0}}), kTol);
  // With x empty the effect is the observational marginal.
  ProbabilityTable obs = ground_truth_effect(p.target, {}, {"W"});
  EXPECT_NEAR(obs.at({{"W", 1}}), enumerate_joint(p.target).marginal({"W"}).at({{"W", 1}}), kTol);
}

TEST(Oracle, ConfoundingSeparatesConditionalFromEffect) {
  SelectionDiagram bow(SemiMarkovianGraph({"X", "Y"}, {{"X", "Y"}}, {{"X", "Y"}}), {});
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DiscreteModelPair p = generate_pair(bow, seed);
    ProbabilityTable j = enumerate_joint(p.source);
    for (int x = 0; x < 2; ++x) {
      const double cond = j.at({{"X", x}, {"Y", 1}}) / j.marginal({"X"}).at({{"X", x}});
      const double eff = ground_truth_effect(p.source, {{"X", x}}, {"Y"}).at({{"Y", 1}});
      worst = std::max(worst, std::fabs(cond - eff));
    }
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(Oracle, DistributionSetCoversEveryExperiment) {
  QueryFile qf = Golden("two_experiments");
  DiscreteModelPair p = generate_pair(qf.diagram, 1);
  DistributionSet eager = build_distribution_set(p, {"Z1", "Z2"});
  EXPECT_EQ(eager.materialized_sources(), 9u);  // 1 + 2 + 2 + 4
  DistributionSet lazy = lazy_distribution_set(p, {"Z1", "Z2"});
  EXPECT_EQ(lazy.materialized_sources(), 0u);
  const ProbabilityTable& t = lazy.source({{"Z1", 1}});
  EXPECT_EQ(t.values(), eager.source({{"Z1", 1}}).values());
  EXPECT_THROW(lazy.source({{"X", 0}}), EvaluationError);
  DistributionSet none = build_distribution_set(p, {});
  EXPECT_EQ(none.materialized_sources(), 1u);
}

TEST(Oracle, BudgetsAreEnforced) {
  std::vector<std::string> nodes;
  for (int i = 0; i < 13; ++i) nodes.push_back("N" + std::to_string(i));
  SelectionDiagram big(SemiMarkovianGraph(nodes, {}, {}), {});
  EXPECT_THROW(generate_pair(big, 1), InputError);
  QueryFile qf = Golden("mediator");
  EXPECT_THROW(generate_pair(qf.diagram, 1, 1), InputError);
  std::vector<std::string> ten(nodes.begin(), nodes.begin() + 10);
  SelectionDiagram wide(SemiMarkovianGraph(ten, {}, {}), {});
  DiscreteModelPair p = generate_pair(wide, 1, 4);
  EXPECT_THROW(build_distribution_set(p, NodeSet(ten.begin(), ten.end())), InputError);
}

TEST(Oracle, ValidatorAcceptsTruthAndRejectsMutants) {
  QueryFile qf = Golden("mediator");
  IdentResult r = sid_z(qf.query.y, qf.query.x, qf.diagram, qf.query.z);
  ASSERT_TRUE(r.ok());
  DiscreteModelPair p = generate_pair(qf.diagram, 11);
  EXPECT_LE(validate_formula(r.formula(), p, qf.query), kTol);
  auto mutants = single_term_mutations(r.formula(), qf.diagram.graph, qf.query.z);
  ASSERT_FALSE(mutants.empty());
  double best = 0;
  for (const ProbExpr& m : mutants) {
    EXPECT_NO_THROW(check_well_formed(m));
    EXPECT_NE(m, r.formula());
    best = std::max(best, validate_formula(m, p, qf.query));
  }
  EXPECT_GT(best, 1e-3);
}

}  // namespace
}  // namespace ztransport
