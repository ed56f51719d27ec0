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

#include "unfoldwl/numeric_gnn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "unfoldwl/generators.h"
#include "unfoldwl/rng.h"
#include "unfoldwl/unfolding.h"

namespace unfoldwl {
namespace {

using ::testing::DoubleEq;
using ::testing::Each;
using testing::MakeGraph;
using testing::Must;

NumericConfig SmallConfig(int m, int layers) {
  NumericConfig cfg;
  cfg.feature_dim = m;
  cfg.layers = layers;
  cfg.combine_hidden = 5;
  cfg.readout_hidden = 4;
  return cfg;
}

NumericDataset WholeGraph(const Graph& g, const std::vector<double>& targets) {
  NumericDataset ds;
  ds.graphs.push_back(ToRealGraph(g));
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    ds.items.push_back({0, v, Eigen::VectorXd::Constant(1, targets[v])});
  }
  return ds;
}

const std::vector<double> kCycleDistances{0, 1, 2, 3, 2, 1};

// Scalar affine perceptron x -> w * x through a width-one hidden layer.
Perceptron Scalar(std::vector<double> weights) {
  Perceptron p;
  p.w1 = Eigen::Map<Eigen::MatrixXd>(weights.data(), 1, weights.size());
  p.b1 = Eigen::VectorXd::Zero(1);
  p.w2 = Eigen::MatrixXd::Ones(1, 1);
  p.b2 = Eigen::VectorXd::Zero(1);
  return p;
}

NumericConfig ScalarAffineConfig(int layers) {
  NumericConfig cfg;
  cfg.feature_dim = 1;
  cfg.layers = layers;
  cfg.combine_hidden = 1;
  cfg.readout_hidden = 1;
  cfg.activation = Activation::kIdentity;
  return cfg;
}

NumericParams ScalarAffineParams(int layers, double self, double neighbor,
                                 double readout) {
  NumericParams p;
  for (int k = 0; k < layers; ++k) p.combine.push_back(Scalar({self, neighbor}));
  p.readout = Scalar({readout});
  return p;
}

TEST(NumericConfigTest, Validate) {
  EXPECT_TRUE(NumericConfig{}.Validate().ok());
  for (int NumericConfig::*field :
       {&NumericConfig::input_dim, &NumericConfig::feature_dim,
        &NumericConfig::layers, &NumericConfig::combine_hidden,
        &NumericConfig::readout_hidden, &NumericConfig::output_dim}) {
    NumericConfig cfg;
    cfg.*field = 0;
    EXPECT_FALSE(cfg.Validate().ok());
    EXPECT_FALSE(InitParams(cfg, 1).ok());
  }
}

TEST(InitParamsTest, ShapesAndSeedDeterminism) {
  const NumericConfig cfg = SmallConfig(4, 3);
  const NumericParams a = Must(InitParams(cfg, 11));
  const NumericParams b = Must(InitParams(cfg, 11));
  const NumericParams c = Must(InitParams(cfg, 12));
  ASSERT_EQ(a.combine.size(), 3u);
  EXPECT_EQ(a.combine[0].w1.rows(), 5);
  EXPECT_EQ(a.combine[0].w1.cols(), 2);
  EXPECT_EQ(a.combine[1].w1.cols(), 8);
  EXPECT_EQ(a.combine[2].w2.rows(), 4);
  EXPECT_EQ(a.readout.w1.cols(), 4);
  EXPECT_EQ(a.readout.w2.rows(), 1);
  const auto sa = a.Scalars();
  const auto sb = b.Scalars();
  const auto sc = c.Scalars();
  ASSERT_EQ(sa.size(), sb.size());
  bool differs = false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    EXPECT_EQ(*sa[i], *sb[i]);
    differs |= *sa[i] != *sc[i];
  }
  EXPECT_TRUE(differs);
  const NumericParams zero = a.ZerosLike();
  for (const double* x : zero.Scalars()) EXPECT_EQ(*x, 0.0);
}

TEST(ForwardTest, IsolatedNodeSeesZeroAggregate) {
  NumericConfig cfg = SmallConfig(3, 1);
  const NumericParams p = Must(InitParams(cfg, 4));
  const Graph g = MakeGraph({2, 1, 1}, {{1, 2}});
  const ForwardPass pass = Must(Forward(ToRealGraph(g), p, cfg));
  Eigen::VectorXd x(2);
  x << 2.0, 0.0;
  const Perceptron& c = p.combine[0];
  const Eigen::VectorXd h =
      c.w2 * (c.w1 * x + c.b1).array().tanh().matrix() + c.b2;
  EXPECT_LT((pass.states[1].col(0) - h).cwiseAbs().maxCoeff(), 1e-15);
  const ForwardPass alone =
      Must(Forward(ToRealGraph(MakeGraph({2}, {})), p, cfg));
  EXPECT_EQ(alone.outputs(0, 0), pass.outputs(0, 0));
}

TEST(ForwardTest, EquivalentNodesGetIdenticalOutputs) {
  for (AggregateKind kind : {AggregateKind::kSum, AggregateKind::kMean}) {
    NumericConfig cfg = SmallConfig(4, 3);
    cfg.aggregate = kind;
    const NumericParams p = Must(InitParams(cfg, 2));
    const ForwardPass tri = Must(Forward(ToRealGraph(testing::Triangle()), p, cfg));
    EXPECT_EQ(tri.outputs(0, 0), tri.outputs(0, 1));
    EXPECT_EQ(tri.outputs(0, 1), tri.outputs(0, 2));
    const ForwardPass c6 =
        Must(Forward(ToRealGraph(testing::MarkedCycle6()), p, cfg));
    EXPECT_TRUE((c6.outputs.col(1).array() == c6.outputs.col(5).array()).all());
    EXPECT_TRUE((c6.outputs.col(2).array() == c6.outputs.col(4).array()).all());
    EXPECT_NE(c6.outputs(0, 0), c6.outputs(0, 3));
  }
}

TEST(ForwardTest, OutputsAgreeAcrossUnfoldingClasses) {
  const NumericConfig cfg = SmallConfig(4, 3);
  const NumericParams p = Must(InitParams(cfg, 8));
  for (const Graph& g : testing::SmallCorpus(40)) {
    const ForwardPass pass = Must(Forward(ToRealGraph(g), p, cfg));
    const std::vector<TreeCode> codes = UnfoldingCodes(g, cfg.layers);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (codes[u] == codes[v]) {
          EXPECT_EQ(pass.outputs(0, u), pass.outputs(0, v));
        }
      }
    }
  }
}

TEST(ForwardTest, PermutationEquivariance) {
  const NumericConfig cfg = SmallConfig(4, 2);
  const NumericParams p = Must(InitParams(cfg, 5));
  SplitMix64 rng(3);
  for (const Graph& g : testing::SmallCorpus(30)) {
    std::vector<NodeId> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = g.num_nodes() - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.Below(i + 1)]);
    }
    const RealGraph rg = ToRealGraph(g);
    const ForwardPass a = Must(Forward(rg, p, cfg));
    const ForwardPass b = Must(Forward(PermuteNodes(rg, perm), p, cfg));
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      EXPECT_EQ(a.outputs(0, v), b.outputs(0, perm[v]));
    }
  }
}

TEST(ForwardTest, RejectsShapeMismatch) {
  const NumericConfig cfg = SmallConfig(4, 2);
  NumericParams p = Must(InitParams(cfg, 5));
  const RealGraph g = ToRealGraph(testing::Triangle());
  NumericConfig wider = cfg;
  wider.input_dim = 2;
  EXPECT_FALSE(Forward(g, p, wider).ok());
  p.combine.pop_back();
  EXPECT_FALSE(Forward(g, p, cfg).ok());
}

TEST(LossTest, ZeroReadoutGivesZeroLossAndGradient) {
  const NumericConfig cfg = SmallConfig(3, 2);
  NumericParams p = Must(InitParams(cfg, 9));
  p.readout.w2.setZero();
  p.readout.b2.setZero();
  const NumericDataset ds = WholeGraph(testing::MarkedCycle6(), {0, 0, 0, 0, 0, 0});
  const LossAndGradient lg = Must(LossAndGrad(ds, p, cfg));
  EXPECT_EQ(lg.mse, 0.0);
  EXPECT_EQ(lg.grad.readout.b2(0), 0.0);
  for (const double* x : std::as_const(lg.grad).Scalars()) EXPECT_EQ(*x, 0.0);
}

TEST(LossTest, DuplicatingEveryItemKeepsTheMean) {
  const NumericConfig cfg = SmallConfig(3, 2);
  const NumericParams p = Must(InitParams(cfg, 9));
  NumericDataset ds = WholeGraph(testing::MarkedCycle6(), kCycleDistances);
  const double once = Must(Loss(ds, p, cfg));
  EXPECT_GT(once, 0.0);
  const auto items = ds.items;
  ds.items.insert(ds.items.end(), items.begin(), items.end());
  EXPECT_NEAR(Must(Loss(ds, p, cfg)), once, 1e-15);
  EXPECT_NEAR(Must(LossAndGrad(ds, p, cfg)).mse, once, 1e-15);
}

TEST(LossTest, RejectsMalformedItems) {
  const NumericConfig cfg = SmallConfig(3, 1);
  const NumericParams p = Must(InitParams(cfg, 9));
  NumericDataset ds = WholeGraph(testing::Triangle(), {0, 0, 0});
  ds.items[0].node = 3;
  EXPECT_FALSE(Loss(ds, p, cfg).ok());
  ds.items[0] = {1, 0, Eigen::VectorXd::Zero(1)};
  EXPECT_FALSE(LossAndGrad(ds, p, cfg).ok());
  ds.items[0] = {0, 0, Eigen::VectorXd::Zero(2)};
  EXPECT_FALSE(Loss(ds, p, cfg).ok());
}

TEST(GradCheckTest, LinearNetworkIsNearlyExact) {
  NumericConfig cfg = SmallConfig(2, 2);
  cfg.activation = Activation::kIdentity;
  cfg.combine_hidden = 2;
  cfg.readout_hidden = 2;
  const NumericParams p = Must(InitParams(cfg, 21));
  const NumericDataset ds = WholeGraph(testing::Path3(), {1, -1, 0.5});
  EXPECT_LE(Must(GradCheck(ds, p, cfg, 1e-6)), 1e-9);
}

TEST(GradCheckTest, SmoothNetworksAgreeWithCentralDifferences) {
  const NumericDataset ds = WholeGraph(testing::MarkedCycle6(), kCycleDistances);
  for (AggregateKind kind : {AggregateKind::kSum, AggregateKind::kMean}) {
    for (int m : {1, 4, 8}) {
      NumericConfig cfg = SmallConfig(m, 3);
      cfg.aggregate = kind;
      for (std::uint64_t seed : {1, 2, 3}) {
        const NumericParams p = Must(InitParams(cfg, seed));
        EXPECT_LE(Must(GradCheck(ds, p, cfg, 1e-6)), 1e-5)
            << "m=" << m << " seed=" << seed;
      }
    }
  }
}

TEST(GradCheckTest, CoarseStepIsDetected) {
  const NumericConfig cfg = SmallConfig(4, 2);
  const NumericParams p = Must(InitParams(cfg, 1));
  const NumericDataset ds = WholeGraph(testing::MarkedCycle6(), kCycleDistances);
  EXPECT_GT(Must(GradCheck(ds, p, cfg, 1.0)), 1e-2);
  EXPECT_FALSE(GradCheck(ds, p, cfg, 0.0).ok());
}

TEST(JacobianTest, DirectNorms) {
  const Perceptron id = Scalar({1.0, 0.0});
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  EXPECT_DOUBLE_EQ(TransitionJacobianNorm(id, Activation::kIdentity, x, 1, 2), 1.0);
  const Perceptron mix = Scalar({0.25, -0.25});
  EXPECT_DOUBLE_EQ(TransitionJacobianNorm(mix, Activation::kIdentity, x, 1, 2), 0.75);
  EXPECT_DOUBLE_EQ(TransitionJacobianNorm(mix, Activation::kIdentity, x, 1, 0), 0.25);
  // tanh'(0) = 1, and the slope shrinks away from zero.
  EXPECT_DOUBLE_EQ(TransitionJacobianNorm(mix, Activation::kTanh, x, 1, 1), 0.5);
  x << 4.0, 0.0;
  EXPECT_LT(TransitionJacobianNorm(mix, Activation::kTanh, x, 1, 1), 0.5);
  const Perceptron r = Scalar({-3.0});
  EXPECT_DOUBLE_EQ(
      ReadoutJacobianNorm(r, Activation::kIdentity, Eigen::VectorXd::Zero(1)), 3.0);
}

TEST(JacobianTest, AffineBoundsAreExact) {
  const NumericConfig cfg = ScalarAffineConfig(3);
  const JacobianBox box = UniformBox(cfg, -1, 1);
  const JacobianBound identity = Must(EstimateJacobianBound(
      ScalarAffineParams(3, 1.0, 0.0, 1.0), cfg, box, 10, 1, 2));
  EXPECT_TRUE(identity.exact);
  EXPECT_EQ(identity.value, 1.0);
  const JacobianBound half = Must(EstimateJacobianBound(
      ScalarAffineParams(3, 0.25, 0.25, 0.5), cfg, box, 10, 1, 1));
  EXPECT_EQ(half.value, 0.5);
  // Degree two doubles the neighbor contribution.
  const JacobianBound deg2 = Must(EstimateJacobianBound(
      ScalarAffineParams(3, 0.25, 0.25, 0.5), cfg, box, 10, 1, 2));
  EXPECT_EQ(deg2.value, 0.75);
}

TEST(JacobianTest, SampledBoundIsMonotoneInSamples) {
  const NumericConfig cfg = SmallConfig(4, 2);
  const NumericParams p = Must(InitParams(cfg, 6));
  const JacobianBox box = UniformBox(cfg, -2, 2);
  double previous = 0;
  for (int samples : {1, 10, 100, 1000}) {
    const JacobianBound b = Must(EstimateJacobianBound(p, cfg, box, samples, 3, 2));
    EXPECT_FALSE(b.exact);
    EXPECT_GE(b.value, previous);
    previous = b.value;
  }
  EXPECT_FALSE(EstimateJacobianBound(p, cfg, box, 0, 3, 2).ok());
}

TEST(PerturbTest, ZeroEtaGivesZeroDrift) {
  const NumericConfig cfg = SmallConfig(4, 3);
  const NumericParams p = Must(InitParams(cfg, 2));
  PerturbOptions opts;
  opts.eta = 0;
  opts.trials = 5;
  const PerturbReport r =
      Must(PerturbExperiment(ToRealGraph(testing::MarkedCycle6()), p, cfg, opts));
  EXPECT_THAT(r.observed, Each(DoubleEq(0.0)));
  EXPECT_EQ(r.readout_observed, 0.0);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.observed.size(), 3u);
}

TEST(PerturbTest, AffineModelsStayWithinExactBounds) {
  NumericConfig cfg = SmallConfig(3, 3);
  cfg.activation = Activation::kIdentity;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const NumericParams p = Must(InitParams(cfg, seed));
    for (double eta : {1e-3, 1e-2}) {
      PerturbOptions opts;
      opts.eta = eta;
      opts.trials = 20;
      opts.seed = seed;
      const PerturbReport r =
          Must(PerturbExperiment(ToRealGraph(testing::MarkedCycle6()), p, cfg, opts));
      EXPECT_TRUE(r.jacobian_bound.exact);
      EXPECT_EQ(r.violations, 0);
      for (std::size_t k = 0; k < r.bounds.size(); ++k) {
        EXPECT_LE(r.observed[k], r.bounds[k]);
      }
      EXPECT_LE(r.readout_observed, r.readout_bound);
    }
  }
}

TEST(PerturbTest, ConstantOffsetsAccumulateThroughIdentityLayers) {
  const NumericConfig cfg = ScalarAffineConfig(4);
  const NumericParams p = ScalarAffineParams(4, 1.0, 0.0, 1.0);
  PerturbOptions opts;
  opts.eta = 1e-2;
  opts.trials = 10;
  opts.offsets = OffsetKind::kConstantPositive;
  const RealGraph path = ToRealGraph(Must(GenPath(4)));
  const PerturbReport r = Must(PerturbExperiment(path, p, cfg, opts));
  ASSERT_EQ(r.observed.size(), 4u);
  EXPECT_GT(r.observed[0], 0.0);
  for (int k = 1; k < 4; ++k) EXPECT_GE(r.observed[k], r.observed[k - 1]);
  // B = 1, so the step-k bound is eta * N * k.
  EXPECT_DOUBLE_EQ(r.bounds[3], 1e-2 * 4 * 4);
  EXPECT_EQ(r.violations, 0);
  const std::string csv = r.ToCsv();
  EXPECT_THAT(csv, ::testing::StartsWith("step,observed,bound,violation\n"));
  EXPECT_THAT(csv, ::testing::HasSubstr("readout,"));
}

TEST(PerturbTest, RejectsBadOptions) {
  const NumericConfig cfg = SmallConfig(2, 1);
  const NumericParams p = Must(InitParams(cfg, 2));
  const RealGraph g = ToRealGraph(testing::Triangle());
  PerturbOptions opts;
  opts.eta = -1;
  EXPECT_FALSE(PerturbExperiment(g, p, cfg, opts).ok());
  opts.eta = 1e-3;
  opts.trials = 0;
  EXPECT_FALSE(PerturbExperiment(g, p, cfg, opts).ok());
}

TEST(TrainTest, ConstantTarget) {
  const NumericDataset ds = WholeGraph(testing::Triangle(), {0.5, 0.5, 0.5});
  TrainHyper hyper;
  hyper.lr = 0.03;
  hyper.steps = 5000;
  hyper.target_mse = 1e-6;
  const TrainResult r = Must(Train(ds, SmallConfig(4, 1), hyper));
  EXPECT_FALSE(r.diverged);
  EXPECT_LE(r.history.back(), 1e-6);
  EXPECT_NEAR(Must(Loss(ds, r.params, SmallConfig(4, 1))), r.history.back(), 1e-15);
}

TEST(TrainTest, CycleDistancesImprove) {
  const NumericDataset ds = WholeGraph(testing::MarkedCycle6(), kCycleDistances);
  TrainHyper hyper;
  hyper.lr = 0.03;
  hyper.steps = 100;
  const TrainResult r = Must(Train(ds, SmallConfig(8, 4), hyper));
  EXPECT_EQ(r.history.size(), 101u);
  EXPECT_LT(r.history.back(), 0.5 * r.history.front());
}

TEST(TrainTest, ViolatingTargetsHaveALossFloor) {
  // Nodes 1 and 5 share their unfolding trees but get targets 1 and 4.
  const std::vector<double> targets{0, 1, 2, 3, 2, 4};
  const NumericDataset ds = WholeGraph(testing::MarkedCycle6(), targets);
  const double gap = 3;
  const double floor = gap * gap / (2.0 * 6 * 1);
  TrainHyper hyper;
  hyper.lr = 0.03;
  hyper.steps = 600;
  const TrainResult r = Must(Train(ds, SmallConfig(8, 4), hyper));
  for (double mse : r.history) EXPECT_GE(mse, (1 - 1e-12) * floor);
  EXPECT_LT(r.history.back(), r.history.front());
}

TEST(TrainTest, RejectsBadHyperparameters) {
  const NumericDataset ds = WholeGraph(testing::Triangle(), {0, 0, 0});
  TrainHyper hyper;
  hyper.lr = 0;
  EXPECT_FALSE(Train(ds, SmallConfig(2, 1), hyper).ok());
  hyper.lr = 0.1;
  hyper.steps = -1;
  EXPECT_FALSE(Train(ds, SmallConfig(2, 1), hyper).ok());
}

TEST(SerializationTest, ParamsRoundTrip) {
  NumericConfig cfg = SmallConfig(3, 2);
  cfg.aggregate = AggregateKind::kMean;
  cfg.activation = Activation::kIdentity;
  cfg.output_dim = 2;
  const NumericParams p = Must(InitParams(cfg, 13));
  const auto [q, cfg2] = Must(ParseParams(SerializeParams(p, cfg)));
  EXPECT_EQ(cfg2.feature_dim, 3);
  EXPECT_EQ(cfg2.layers, 2);
  EXPECT_EQ(cfg2.output_dim, 2);
  EXPECT_EQ(cfg2.aggregate, AggregateKind::kMean);
  EXPECT_EQ(cfg2.activation, Activation::kIdentity);
  const auto a = p.Scalars();
  const auto b = q.Scalars();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(*a[i], *b[i]);
  EXPECT_FALSE(ParseParams("{}").ok());
  EXPECT_FALSE(ParseParams("not json").ok());
}

TEST(SerializationTest, DatasetRoundTrip) {
  const NumericDataset ds = WholeGraph(testing::MarkedCycle6(), kCycleDistances);
  const NumericDataset back = Must(ParseNumericDataset(SerializeNumericDataset(ds)));
  EXPECT_EQ(back.graphs, ds.graphs);
  ASSERT_EQ(back.items.size(), 6u);
  EXPECT_EQ(back.items[3].target(0), 3.0);
  const NumericDataset rational = Must(ParseNumericDataset(
      R"({"graphs":[{"nodes":[{"id":0,"label":[0]}],"edges":[]}],)"
      R"("items":[{"graph":0,"node":0,"target":["3/4"]}]})"));
  EXPECT_EQ(rational.items[0].target(0), 0.75);
}

}  // namespace
}  // namespace unfoldwl
