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

#include "unfoldwl/graph.h"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "unfoldwl/generators.h"
#include "unfoldwl/rng.h"

namespace unfoldwl {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;
using testing::MakeGraph;
using testing::Must;

std::vector<NodeId> AsVector(std::span<const NodeId> s) {
  return {s.begin(), s.end()};
}

TEST(ParseGraphTest, SingleNode) {
  const Graph g = Must(ParseGraph(R"({"nodes":[{"id":0,"label":[0]}],"edges":[]})"));
  EXPECT_EQ(g.num_nodes(), 1);
  EXPECT_EQ(g.num_edges(), 0);
  EXPECT_EQ(g.label_dim(), 1);
}

TEST(ParseGraphTest, Triangle) {
  const Graph g = Must(ParseGraph(
      R"({"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0]},{"id":2,"label":[0]}],)"
      R"("edges":[[0,1],[2,1],[0,2]]})"));
  EXPECT_EQ(g.num_nodes(), 3);
  EXPECT_EQ(g.num_edges(), 3);
  EXPECT_THAT(g.edges(), ElementsAre(Edge{0, 1}, Edge{0, 2}, Edge{1, 2}));
}

TEST(ParseGraphTest, EdgeOutOfRange) {
  auto g = ParseGraph(
      R"({"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0]},{"id":2,"label":[0]}],)"
      R"("edges":[[0,5]]})");
  ASSERT_FALSE(g.ok());
  EXPECT_THAT(std::string(g.status().message()), HasSubstr("node id out of range"));
}

TEST(ParseGraphTest, RejectsMalformedDocuments) {
  const char* bad[] = {
      "not json",
      R"({"edges":[]})",
      R"({"nodes":[],"edges":[]})",
      R"({"nodes":[{"id":0,"label":[]}],"edges":[]})",
      R"({"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0,1]}],"edges":[]})",
      R"({"nodes":[{"id":0,"label":[0]},{"id":1,"label":[0]}],"edges":[[0,1],[1,0]]})",
      R"({"nodes":[{"id":0,"label":[0]},{"id":0,"label":[0]}],"edges":[]})",
      R"({"nodes":[{"id":1,"label":[0]}],"edges":[]})",
      R"({"nodes":[{"id":0,"label":[0.5]}],"edges":[]})",
      R"({"nodes":[{"id":0,"label":[0]}],"edges":[[0]]})",
  };
  for (const char* doc : bad) {
    EXPECT_FALSE(ParseGraph(doc).ok()) << doc;
  }
}

TEST(ParseGraphTest, SelfLoopAndBigLabels) {
  const Graph g = Must(ParseGraph(
      R"({"nodes":[{"id":0,"label":["123456789012345678901234567890"]}],"edges":[[0,0]]})"));
  EXPECT_EQ(g.label(0)[0], BigInt("123456789012345678901234567890"));
  EXPECT_THAT(AsVector(g.neighbors(0)), ElementsAre(0));
}

TEST(ParseGraphTest, RealModeAcceptsFloats) {
  const RealGraph g = Must(ParseRealGraph(
      R"({"nodes":[{"id":0,"label":[0.25,-1]}],"edges":[]})"));
  EXPECT_THAT(g.label(0), ElementsAre(0.25, -1.0));
}

TEST(SerializeGraphTest, RoundTripIsIdentity) {
  for (const Graph& g : testing::SmallCorpus(40)) {
    const Graph again = Must(ParseGraph(SerializeGraph(g)));
    EXPECT_EQ(again, g);
    EXPECT_EQ(SerializeGraph(again), SerializeGraph(g));
  }
}

TEST(SerializeGraphTest, CorpusRoundTrip) {
  const std::vector<Graph> corpus = testing::SmallCorpus(10);
  EXPECT_EQ(Must(ParseCorpus(SerializeCorpus(corpus))), corpus);
  EXPECT_EQ(Must(ParseCorpus(SerializeGraph(corpus[0]))).size(), 1);
}

TEST(NeighborsTest, Examples) {
  EXPECT_THAT(AsVector(Must(Neighbors(testing::Triangle(), 0))), ElementsAre(1, 2));
  EXPECT_THAT(AsVector(Must(Neighbors(MakeGraph({0, 0}, {}), 1))), IsEmpty());
  EXPECT_THAT(AsVector(Must(Neighbors(Must(GenCycle(6, CycleMarking::kNone)), 3))),
              ElementsAre(2, 4));
  EXPECT_EQ(Neighbors(testing::Triangle(), 3).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(DiameterTest, Examples) {
  EXPECT_EQ(Diameter(testing::Triangle()), 1);
  EXPECT_EQ(Diameter(testing::Path3()), 2);
  EXPECT_EQ(Diameter(Must(GenCycle(6, CycleMarking::kNone))), 3);
  EXPECT_EQ(Diameter(MakeGraph({0}, {})), 0);
  // Largest component wins.
  EXPECT_EQ(Diameter(MakeGraph({0, 0, 0, 0, 0}, {{0, 1}, {2, 3}, {3, 4}})), 2);
}

TEST(DiameterTest, BoundedAndPermutationInvariant) {
  SplitMix64 rng(3);
  for (const Graph& g : testing::SmallCorpus(60)) {
    const int r = Diameter(g);
    EXPECT_LE(r, g.num_nodes() - 1);
    std::vector<NodeId> perm(g.num_nodes());
    for (int i = 0; i < g.num_nodes(); ++i) perm[i] = i;
    for (int i = g.num_nodes() - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.Below(i + 1)]);
    }
    EXPECT_EQ(Diameter(PermuteNodes(g, perm)), r);
  }
}

TEST(QuantizerTest, HandComputedCells) {
  // Cells of width 0.25 starting at -1: -0.9 in [-1,-0.75), 0.1 in [0,0.25),
  // 0.9 in [0.75,1].
  const QuantizerConfig cfg{1.0, 0.25};
  EXPECT_EQ(Must(QuantizeValue(-0.9, cfg)), 0);
  EXPECT_EQ(Must(QuantizeValue(0.1, cfg)), 4);
  EXPECT_EQ(Must(QuantizeValue(0.9, cfg)), 7);
  EXPECT_EQ(Must(QuantizeValue(1.0, cfg)), 7);
  EXPECT_EQ(Must(QuantizeValue(-1.0, cfg)), 0);
}

TEST(QuantizerTest, Errors) {
  EXPECT_FALSE(QuantizeValue(1.5, {1.0, 0.25}).ok());
  EXPECT_FALSE(QuantizeValue(0.0, {0.0, 0.25}).ok());
  EXPECT_FALSE(QuantizeValue(0.0, {1.0, -1.0}).ok());
}

TEST(QuantizerTest, ConstantOnCellsAndInjectiveAcross) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const double b = rng.Uniform(0.5, 4.0);
    const double w = rng.Uniform(0.05, 1.0);
    const QuantizerConfig cfg{b, w};
    for (int k = 0; k < 200; ++k) {
      const double x = rng.Uniform(-b, b);
      const double y = rng.Uniform(-b, b);
      const BigInt qx = Must(QuantizeValue(x, cfg));
      const BigInt qy = Must(QuantizeValue(y, cfg));
      const double cx = std::floor((x + b) / w);
      const double cy = std::floor((y + b) / w);
      EXPECT_EQ(cx == cy, qx == qy) << x << " " << y;
    }
  }
}

TEST(QuantizerTest, QuantizeLabelsKeepsStructure) {
  const RealGraph g = Must(RealGraph::Create({{-0.9}, {0.1}, {0.9}, {0.12}},
                                             {{0, 1}, {2, 3}}));
  const Graph q = Must(QuantizeLabels(g, {1.0, 0.25}));
  EXPECT_EQ(q.edges(), g.edges());
  EXPECT_EQ(q.label(1), q.label(3));
  EXPECT_NE(q.label(0), q.label(1));
  EXPECT_NE(q.label(1), q.label(2));
}

TEST(GraphTest, ToRealGraphConvertsLabels) {
  const RealGraph r = ToRealGraph(testing::MarkedCycle6());
  EXPECT_EQ(r.label(0)[0], 1.0);
  EXPECT_EQ(r.label(3)[0], 0.0);
  EXPECT_EQ(r.edges(), testing::MarkedCycle6().edges());
}

}  // namespace
}  // namespace unfoldwl
