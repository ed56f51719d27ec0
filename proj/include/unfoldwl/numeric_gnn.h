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

#ifndef UNFOLDWL_NUMERIC_GNN_H_
#define UNFOLDWL_NUMERIC_GNN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "unfoldwl/graph.h"

namespace unfoldwl {

enum class AggregateKind { kSum, kMean };
enum class Activation { kTanh, kIdentity };

// Message-passing GNN with two-layer perceptron components:
//   a_v   = sum (or mean) of h_u^{k-1} over u in ne[v]
//   h_v^k = W2_k act(W1_k [h_v^{k-1}; a_v] + b1_k) + b2_k
//   y_v   = V2 act(V1 h_v^K + c1) + c2
// with h_v^0 = l_v.
struct NumericConfig {
  int input_dim = 1;     // label dimension
  int feature_dim = 4;   // m
  int layers = 2;        // K
  AggregateKind aggregate = AggregateKind::kSum;
  int combine_hidden = 8;
  int readout_hidden = 8;
  int output_dim = 1;
  Activation activation = Activation::kTanh;

  absl::Status Validate() const;
  // Dimension of h^k.
  int StateDim(int k) const { return k == 0 ? input_dim : feature_dim; }
};

struct Perceptron {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

struct NumericParams {
  std::vector<Perceptron> combine;  // one per layer
  Perceptron readout;

  // Same shapes, all zero.
  NumericParams ZerosLike() const;
  // Every scalar parameter, in serialization order.
  std::vector<double*> Scalars();
  std::vector<const double*> Scalars() const;
};

// Uniform entries in [-1, 1) / sqrt(fan_in), drawn from SplitMix64(seed).
absl::StatusOr<NumericParams> InitParams(const NumericConfig& cfg,
                                         std::uint64_t seed);

struct ForwardPass {
  // states[k] is StateDim(k) x N, one column per node.
  std::vector<Eigen::MatrixXd> states;
  Eigen::MatrixXd outputs;  // output_dim x N
};

// Neighbor vectors are summed in lexicographic order of their values, so the
// aggregate depends only on the multiset and nodes with equal unfolding trees
// get bit-identical states.
absl::StatusOr<ForwardPass> Forward(const RealGraph& g, const NumericParams& p,
                                    const NumericConfig& cfg);

struct NumericItem {
  int graph = 0;
  NodeId node = 0;
  Eigen::VectorXd target;
};

struct NumericDataset {
  std::vector<RealGraph> graphs;
  std::vector<NumericItem> items;
};

struct LossAndGradient {
  // Mean over items and output coordinates of the squared error.
  double mse = 0;
  NumericParams grad;
};

absl::StatusOr<double> Loss(const NumericDataset& ds, const NumericParams& p,
                            const NumericConfig& cfg);
// Reverse-mode gradient of Loss.
absl::StatusOr<LossAndGradient> LossAndGrad(const NumericDataset& ds,
                                            const NumericParams& p,
                                            const NumericConfig& cfg);

// Max over parameters of |a - b| / max(1e-8, |a| + |b|), a the analytic and
// b the central-difference derivative with step h. The two difference losses
// are evaluated in long double so that roundoff stays well below the
// truncation error at small h.
absl::StatusOr<double> GradCheck(const NumericDataset& ds,
                                 const NumericParams& p,
                                 const NumericConfig& cfg, double h);

// ---------------------------------------------------------------------------
// Jacobian bounds.
//
// The transition of layer k maps the stacked states H^{k-1} to H^k. Row v of
// its Jacobian has infinity-norm
//   sum_j |d f / d h_v|_ij + c * sum_j |d f / d a_v|_ij
// with c = max degree for sum aggregation and 1 for mean (0 without edges).

struct Interval {
  double lo = 0;
  double hi = 0;
};

// Per-coordinate sampling ranges: combine[k-1] covers [h_v; a_v] of layer k,
// readout covers h^K.
struct JacobianBox {
  std::vector<std::vector<Interval>> combine;
  std::vector<Interval> readout;
};

JacobianBox UniformBox(const NumericConfig& cfg, double lo, double hi);

// Infinity-norm of one node's transition Jacobian at input x.
double TransitionJacobianNorm(const Perceptron& mlp, Activation act,
                              const Eigen::VectorXd& x, int self_dim,
                              double aggregate_factor);
double ReadoutJacobianNorm(const Perceptron& mlp, Activation act,
                           const Eigen::VectorXd& x);

inline constexpr double kJacobianSafetyFactor = 1.5;

struct JacobianBound {
  double value = 0;
  // Computed from the weights (affine components) rather than sampled.
  bool exact = false;
};

// Bound B over every transition and the readout. Affine configurations
// (identity activation) are bounded exactly; otherwise the supremum over
// `samples` uniform points per component times kJacobianSafetyFactor. The
// i-th sample does not depend on `samples`, so the estimate is monotone in it.
absl::StatusOr<JacobianBound> EstimateJacobianBound(
    const NumericParams& p, const NumericConfig& cfg, const JacobianBox& box,
    int samples, std::uint64_t seed, int max_degree);

// ---------------------------------------------------------------------------
// Perturbation experiment: every transition f^k and the readout are replaced
// by f + delta with |delta|_inf <= eta, and the drift of the perturbed run is
// compared against
//   |H~^k - H^k|_inf <= eta N sum_{i<k} B^i
//   |y~ - y|_inf     <= eta N + B eta N sum_{i<K} B^i .

enum class OffsetKind {
  // delta_i(x) = eta * a_i * sin(<w_i, x> + phi_i), a_i in (-1, 1).
  kSmooth,
  // delta_i = eta * a_i with a_i in [0.5, 1): constant and positive.
  kConstantPositive,
};

struct PerturbOptions {
  double eta = 1e-3;
  int trials = 100;
  std::uint64_t seed = 1;
  OffsetKind offsets = OffsetKind::kSmooth;
  int jacobian_samples = 2000;
};

struct PerturbReport {
  double eta = 0;
  int num_nodes = 0;
  int trials = 0;
  JacobianBound jacobian_bound;
  // Index k-1 holds step k; the maximum over trials.
  std::vector<double> observed;
  std::vector<double> bounds;
  double readout_observed = 0;
  double readout_bound = 0;
  int violations = 0;

  // step,observed,bound,violation; the readout row has step "readout".
  std::string ToCsv() const;
};

absl::StatusOr<PerturbReport> PerturbExperiment(const RealGraph& g,
                                                const NumericParams& p,
                                                const NumericConfig& cfg,
                                                const PerturbOptions& options);

// ---------------------------------------------------------------------------

struct TrainHyper {
  double lr = 0.03;
  int steps = 1000;
  std::uint64_t seed = 1;
  // Heavy-ball momentum; 0 is plain gradient descent.
  double momentum = 0.9;
  // Stop as soon as the loss is at or below this value.
  double target_mse = 0;
};

struct TrainResult {
  NumericParams params;
  // Loss before each update, then the final loss.
  std::vector<double> history;
  bool diverged = false;
};

// Full-batch gradient descent from InitParams(cfg, hyper.seed).
absl::StatusOr<TrainResult> Train(const NumericDataset& ds,
                                  const NumericConfig& cfg,
                                  const TrainHyper& hyper);

// {"config":{...},"tensors":[{"name":"combine.0.w1","shape":[r,c],
//  "data":[...row-major...]},...]}
std::string SerializeParams(const NumericParams& p, const NumericConfig& cfg);
absl::StatusOr<std::pair<NumericParams, NumericConfig>> ParseParams(
    std::string_view document);

// {"graphs":[...],"items":[{"graph":g,"node":v,"target":[...]}]}
absl::StatusOr<NumericDataset> ParseNumericDataset(std::string_view document);
std::string SerializeNumericDataset(const NumericDataset& ds);

}  // namespace unfoldwl

#endif  // UNFOLDWL_NUMERIC_GNN_H_
