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

#include "unfoldwl/exact_gnn.h"

#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "unfoldwl/generators.h"
#include "unfoldwl/suite.h"
#include "unfoldwl/unfolding.h"

namespace unfoldwl {
namespace {

using testing::MakeGraph;
using testing::Must;

TreeCode LeafCode(int x) { return EncodeTree(UnfoldingTree::Leaf({BigInt(x)})); }

Dataset WholeGraph(const Graph& g, const std::vector<int>& targets) {
  Dataset ds;
  ds.graphs.push_back(g);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    ds.items.push_back({0, v, {Rational(targets[v])}});
  }
  return ds;
}

TEST(EncodeDecodeTest, LeafRoundTrip) {
  const TreeCode c0 = LeafCode(0);
  const UnfoldingTree t = Must(DecodeTree(c0));
  EXPECT_EQ(t.root_label(), Graph::Label{0});
  EXPECT_TRUE(t.children().empty());
  EXPECT_FALSE(DecodeTree(TreeCode(BigInt(12345))).ok());
}

TEST(AggregateExactTest, Examples) {
  EXPECT_EQ(Must(AggregateExact({})), EncodeTree(UnfoldingTree::VoidLeaf()));
  const std::vector<TreeCode> one{LeafCode(0)};
  const UnfoldingTree single = Must(DecodeTree(Must(AggregateExact(one))));
  EXPECT_TRUE(single.is_void());
  ASSERT_EQ(single.children().size(), 1u);
  const std::vector<TreeCode> twice{LeafCode(3), LeafCode(3)};
  EXPECT_EQ(Must(DecodeTree(Must(AggregateExact(twice)))).children().size(), 2u);
  const std::vector<TreeCode> bad{TreeCode(BigInt(7))};
  EXPECT_FALSE(AggregateExact(bad).ok());
}

TEST(CombineExactTest, Examples) {
  EXPECT_EQ(Must(CombineExact(LeafCode(7), EncodeTree(UnfoldingTree::VoidLeaf()))),
            LeafCode(7));
  EXPECT_EQ(CombineExact(LeafCode(7), LeafCode(1)).status().code(),
            absl::StatusCode::kInvalidArgument);
  const Graph g = testing::Path3();
  const std::vector<TreeCode> incoming{LeafCode(0), LeafCode(0)};
  EXPECT_EQ(Must(CombineExact(LeafCode(0), Must(AggregateExact(incoming)))),
            CanonicalCode(Must(Unfold(g, 1, 1))));
}

TEST(RunExactGnnTest, MatchesDirectUnfolding) {
  const Graph path = testing::Path3();
  const auto h = RunExactGnn(path, 2);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0], std::vector<TreeCode>(3, LeafCode(0)));
  EXPECT_EQ(h[2], UnfoldingCodes(path, 2));
  EXPECT_EQ(RunExactGnn(testing::Triangle(), 2)[2],
            UnfoldingCodes(testing::Triangle(), 2));
  for (const Graph& g : testing::SmallCorpus(60)) {
    const int steps = Diameter(g) + 1;
    const auto history = RunExactGnn(g, steps);
    for (int k = 0; k <= steps; ++k) EXPECT_EQ(history[k], UnfoldingCodes(g, k));
  }
}

TEST(ValidateTargetTest, Examples) {
  const Graph c6 = testing::MarkedCycle6();
  EXPECT_FALSE(Must(ValidateTarget(WholeGraph(c6, {5, 5, 5, 5, 5, 5}))).has_value());
  EXPECT_FALSE(Must(ValidateTarget(WholeGraph(c6, {0, 1, 2, 3, 2, 1}))).has_value());
  const auto violation = Must(ValidateTarget(WholeGraph(c6, {0, 1, 2, 3, 2, 9})));
  ASSERT_TRUE(violation.has_value());
  EXPECT_EQ(violation->node_a, 1);
  EXPECT_EQ(violation->node_b, 5);
  for (const Graph& g : testing::SmallCorpus(30)) {
    Dataset ds;
    ds.graphs = {g};
    ds.items = GenEquivalenceRespectingTargets(g, 3);
    EXPECT_FALSE(Must(ValidateTarget(ds)).has_value());
  }
}

TEST(ValidateTargetTest, MalformedItems) {
  Dataset ds = WholeGraph(testing::Triangle(), {0, 0, 0});
  ds.items.push_back({0, 3, {Rational(0)}});
  EXPECT_FALSE(ValidateTarget(ds).ok());
  ds.items.back() = {1, 0, {Rational(0)}};
  EXPECT_FALSE(ValidateTarget(ds).ok());
  ds.items.back() = {0, 0, {Rational(0), Rational(1)}};
  EXPECT_FALSE(ValidateTarget(ds).ok());
}

TEST(ConstructGnnTest, SingletonDataset) {
  Dataset ds;
  ds.graphs = {testing::Triangle()};
  ds.items = {{0, 2, {Rational(3, 7), Rational(-1)}}};
  const ExactGnnProgram p = Must(ConstructGnn(ds));
  EXPECT_EQ(p.steps, 2);
  EXPECT_EQ(p.readout.size(), 1u);
  EXPECT_EQ(Must(Evaluate(p, testing::Triangle(), 2)), ds.items[0].target);
  EXPECT_EQ(p.default_output, (Target{Rational(0), Rational(0)}));
}

TEST(ConstructGnnTest, CycleDistancesReproducedExactly) {
  const Graph c6 = testing::MarkedCycle6();
  const std::vector<int> distances{0, 1, 2, 3, 2, 1};
  const ExactGnnProgram p = Must(ConstructGnn(WholeGraph(c6, distances)));
  EXPECT_EQ(p.steps, 4);
  EXPECT_EQ(p.readout.size(), 4u);
  const std::vector<Target> out = EvaluateAll(p, c6);
  for (NodeId v = 0; v < 6; ++v) EXPECT_EQ(out[v], Target{Rational(distances[v])});
}

TEST(ConstructGnnTest, RefusesViolatingTargets) {
  EXPECT_EQ(ConstructGnn(WholeGraph(testing::MarkedCycle6(), {0, 1, 2, 3, 2, 9}))
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(ConstructGnn(Dataset{}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ConstructGnnTest, RandomEquivalenceRespectingDatasets) {
  const std::vector<Graph> corpus = testing::SmallCorpus(50, 5);
  for (int d = 0; d < 50; ++d) {
    const Dataset ds = GenEquivalenceRespectingDataset(
        {corpus[d], corpus[(d + 1) % 50]}, 100 + d);
    const ExactGnnProgram p = Must(ConstructGnn(ds));
    for (const DatasetItem& item : ds.items) {
      EXPECT_EQ(Must(Evaluate(p, ds.graphs[item.graph], item.node)), item.target);
    }
  }
}

TEST(EvaluateTest, EquivalentNodesAndNovelGraphs) {
  const Graph c6 = testing::MarkedCycle6();
  const ExactGnnProgram p = Must(ConstructGnn(WholeGraph(c6, {0, 1, 2, 3, 2, 1})));
  // The same cycle marked at node 3 instead of node 0.
  const Graph shifted = MakeGraph(
      {0, 0, 0, 1, 0, 0}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  const std::vector<Target> out = EvaluateAll(p, shifted);
  EXPECT_EQ(out[3], Target{Rational(0)});
  EXPECT_EQ(out[0], Target{Rational(3)});
  EXPECT_EQ(out[2], out[4]);
  EXPECT_EQ(Must(Evaluate(p, testing::Triangle(), 0)), p.default_output);
  EXPECT_EQ(Evaluate(p, c6, 6).status().code(), absl::StatusCode::kOutOfRange);
}

TEST(EvaluateTest, RespectsUnfoldingEquivalence) {
  for (const Graph& g : testing::SmallCorpus(40)) {
    Dataset ds;
    ds.graphs = {g};
    ds.items = GenEquivalenceRespectingTargets(g, 17);
    const ExactGnnProgram p = Must(ConstructGnn(ds));
    const std::vector<Target> out = EvaluateAll(p, g);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (Must(UnfoldingEquivalent(g, u, v))) {
          EXPECT_EQ(out[u], out[v]);
        }
      }
    }
  }
}

TEST(SerializationTest, ProgramAndDatasetRoundTrip) {
  const Dataset ds = WholeGraph(testing::MarkedCycle6(), {0, 1, 2, 3, 2, 1});
  const ExactGnnProgram p = Must(ConstructGnn(ds));
  const ExactGnnProgram back = Must(ParseProgram(SerializeProgram(p)));
  EXPECT_EQ(back.steps, p.steps);
  EXPECT_EQ(back.readout, p.readout);
  EXPECT_EQ(back.default_output, p.default_output);

  const Dataset ds2 = Must(ParseDataset(SerializeDataset(ds)));
  EXPECT_EQ(ds2.graphs, ds.graphs);
  ASSERT_EQ(ds2.items.size(), ds.items.size());
  EXPECT_EQ(ds2.items[3].target, ds.items[3].target);

  EXPECT_FALSE(ParseProgram("{}").ok());
  EXPECT_FALSE(ParseProgram(R"({"steps":1,"readout":[{"code":"x","out":[]}],"default":[]})").ok());
  EXPECT_FALSE(ParseProgram(R"({"steps":-1,"readout":[],"default":[]})").ok());
  EXPECT_FALSE(ParseDataset(R"({"graphs":[],"items":[{"graph":0,"node":0,"target":[1]}]})").ok());
}

}  // namespace
}  // namespace unfoldwl
