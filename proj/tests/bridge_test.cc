// Copyright 2026 The unfoldwl Authors
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

#include "unfoldwl/bridge.h"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "unfoldwl/generators.h"

namespace unfoldwl {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;
using testing::MakeGraph;
using testing::Must;

TEST(StepwiseTest, SmallGraphs) {
  const BridgeReport single = CheckStepwiseCorrespondence(MakeGraph({0}, {}), 4);
  EXPECT_TRUE(single.all_steps_match());
  EXPECT_EQ(single.step_match.size(), 5u);

  const BridgeReport path = CheckStepwiseCorrespondence(testing::Path3(), 3);
  EXPECT_TRUE(path.all_steps_match());
  EXPECT_EQ(path.step_match, std::vector<bool>(4, true));
}

TEST(StepwiseTest, RandomCorpusHasNoCounterexamples) {
  CorpusSpec spec;
  spec.count = 200;
  spec.seed = 99;
  for (const Graph& g : Must(GenerateCorpus(spec))) {
    const BridgeReport r = CheckStepwiseCorrespondence(g, g.num_nodes());
    EXPECT_TRUE(r.all_steps_match());
    EXPECT_FALSE(r.counterexample.has_value());
  }
}

TEST(StepwiseTest, MutantsProduceCounterexamples) {
  BridgeOptions colliding;
  colliding.wl.hash = HashMode::kColliding;
  BridgeOptions set_children;
  set_children.children = ChildSemantics::kSet;
  // Node 1 has the twin neighbors 0 and 2; node 4 has the single neighbor 3
  // with the same label.
  const Graph twins = MakeGraph({1, 0, 1, 1, 0}, {{0, 1}, {1, 2}, {3, 4}});
  const BridgeReport r = CheckStepwiseCorrespondence(twins, 3, set_children);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->t, 1);
  EXPECT_FALSE(r.counterexample->same_wl_color);
  EXPECT_TRUE(r.step_match[0]);
  EXPECT_FALSE(r.step_match[1]);

  int caught = 0;
  for (const Graph& g : testing::SmallCorpus(60)) {
    if (!CheckStepwiseCorrespondence(g, g.num_nodes(), colliding).all_steps_match()) {
      ++caught;
    }
  }
  EXPECT_GT(caught, 0);
}

TEST(NodeTheoremTest, Examples) {
  EXPECT_TRUE(CheckNodeTheorem(Must(GenCycle(6, CycleMarking::kNone))));
  EXPECT_TRUE(CheckNodeTheorem(Must(GenCirculant(8, 3))));
  EXPECT_TRUE(CheckNodeTheorem(testing::MarkedCycle6()));
  for (const Graph& g : testing::SmallCorpus(100)) EXPECT_TRUE(CheckNodeTheorem(g));
}

TEST(GraphTheoremTest, Examples) {
  const GraphVerdicts same = CheckGraphTheorem(testing::Triangle(), testing::Triangle());
  EXPECT_TRUE(same.wl);
  EXPECT_TRUE(same.agree());
  const GraphVerdicts differ = CheckGraphTheorem(testing::Triangle(), testing::Path3());
  EXPECT_FALSE(differ.wl);
  EXPECT_TRUE(differ.agree());
  const std::vector<Graph> corpus = testing::SmallCorpus(30);
  for (const Graph& a : corpus) {
    for (const Graph& b : corpus) EXPECT_TRUE(CheckGraphTheorem(a, b).agree());
  }
}

TEST(ConvergenceBoundTest, Examples) {
  const ConvergenceBound tri = CheckConvergenceBound(testing::Triangle());
  EXPECT_EQ(tri.steps, 1);
  EXPECT_EQ(tri.r, 1);
  EXPECT_TRUE(tri.within_r);
  const ConvergenceBound path = CheckConvergenceBound(testing::Path3());
  EXPECT_EQ(path.steps, 2);
  EXPECT_EQ(path.r, 2);
  EXPECT_TRUE(path.within_r);
  const ConvergenceBound c6 = CheckConvergenceBound(testing::MarkedCycle6());
  EXPECT_EQ(c6.r, 3);
  EXPECT_LE(c6.steps, 4);
  EXPECT_TRUE(c6.within_r_plus_1);
}

TEST(ConvergenceBoundTest, EdgelessGraphExceedsR) {
  // r = 0 but counting needs at least one step.
  const ConvergenceBound c = CheckConvergenceBound(MakeGraph({0, 1}, {}));
  EXPECT_EQ(c.steps, 1);
  EXPECT_FALSE(c.within_r);
  EXPECT_TRUE(c.within_r_plus_1);
}

TEST(DepthSufficiencyTest, Corpus) {
  for (const Graph& g : testing::SmallCorpus(100)) EXPECT_TRUE(CheckDepthSufficiency(g));
}

TEST(BridgeReportTest, FieldsAndCsv) {
  const BridgeReport r = BuildBridgeReport(testing::MarkedCycle6(), 7);
  EXPECT_EQ(r.graph_id, 7);
  EXPECT_EQ(r.num_nodes, 6);
  EXPECT_EQ(r.num_edges, 6);
  EXPECT_EQ(r.diameter, 3);
  EXPECT_EQ(r.classes_wl, 4);
  EXPECT_EQ(r.classes_unfold, 4);
  EXPECT_TRUE(r.final_match);
  EXPECT_TRUE(r.bound_satisfied);
  EXPECT_EQ(r.step_match.size(), 7u);

  const std::vector<BridgeReport> reports{r};
  const std::string csv = BridgeReportsToCsv(reports);
  EXPECT_THAT(csv, StartsWith("graph_id,n,m,diameter,wl_steps,classes_wl,"
                              "classes_unfold,match,bound_r,bound_r1\n"));
  EXPECT_THAT(csv, HasSubstr("\n7,6,6,3,"));
}

}  // namespace
}  // namespace unfoldwl
