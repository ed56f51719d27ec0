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
#include <functional>
#include <numbers>
#include <utility>

#include "absl/strings/str_cat.h"
#include "unfoldwl/json_util.h"
#include "unfoldwl/rng.h"

namespace unfoldwl {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Applied to the output of component c (0..K-1 transitions, K readout) given
// that component's input.
template <typename S>
using PerturbFn =
    std::function<void(int component, const Vec<S>& x, Vec<S>& y)>;

template <typename S>
struct Layer {
  Mat<S> w1;
  Vec<S> b1;
  Mat<S> w2;
  Vec<S> b2;
};

template <typename S>
Layer<S> CastLayer(const Perceptron& m) {
  return Layer<S>{m.w1.cast<S>(), m.b1.cast<S>(), m.w2.cast<S>(),
                  m.b2.cast<S>()};
}

template <typename S>
struct ComponentCache {
  Mat<S> inputs;  // one column per node
  Mat<S> hidden;  // activations
};

template <typename S>
struct Trace {
  std::vector<Mat<S>> states;
  std::vector<ComponentCache<S>> layers;
  ComponentCache<S> readout;
  Mat<S> outputs;
};

template <typename S>
Vec<S> Activate(Activation act, const Vec<S>& z) {
  if (act == Activation::kIdentity) return z;
  return z.array().tanh().matrix();
}

// Derivative expressed through the activation value.
VectorXd ActivationSlope(Activation act, const VectorXd& s) {
  if (act == Activation::kIdentity) return VectorXd::Ones(s.size());
  return (1.0 - s.array().square()).matrix();
}

template <typename S>
Vec<S> ApplyLayer(const Layer<S>& m, Activation act, const Vec<S>& x,
                  Vec<S>* hidden) {
  Vec<S> s = Activate<S>(act, m.w1 * x + m.b1);
  Vec<S> y = m.w2 * s + m.b2;
  if (hidden != nullptr) *hidden = std::move(s);
  return y;
}

// Accumulates parameter gradients into `grad` and returns dL/dx.
VectorXd BackwardPerceptron(const Perceptron& m, Activation act,
                            const VectorXd& x, const VectorXd& s,
                            const VectorXd& gy, Perceptron& grad) {
  grad.w2.noalias() += gy * s.transpose();
  grad.b2 += gy;
  const VectorXd dz =
      ((m.w2.transpose() * gy).array() * ActivationSlope(act, s).array())
          .matrix();
  grad.w1.noalias() += dz * x.transpose();
  grad.b1 += dz;
  return m.w1.transpose() * dz;
}

template <typename S>
bool LexLess(const Mat<S>& states, NodeId a, NodeId b) {
  for (Eigen::Index i = 0; i < states.rows(); ++i) {
    if (states(i, a) != states(i, b)) return states(i, a) < states(i, b);
  }
  return false;
}

template <typename S>
Vec<S> AggregateNeighbors(const RealGraph& g, const Mat<S>& states, NodeId v,
                          AggregateKind kind) {
  std::vector<NodeId> order(g.neighbors(v).begin(), g.neighbors(v).end());
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return LexLess<S>(states, a, b); });
  Vec<S> sum = Vec<S>::Zero(states.rows());
  for (NodeId u : order) sum += states.col(u);
  if (kind == AggregateKind::kMean && !order.empty()) {
    sum /= static_cast<S>(order.size());
  }
  return sum;
}

absl::Status CheckShapes(const NumericParams& p, const NumericConfig& cfg) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  auto check = [](const Perceptron& m, int in, int hidden, int out,
                  const std::string& what) -> absl::Status {
    if (m.w1.rows() != hidden || m.w1.cols() != in || m.b1.size() != hidden ||
        m.w2.rows() != out || m.w2.cols() != hidden || m.b2.size() != out) {
      return absl::InvalidArgumentError(
          absl::StrCat(what, ": parameter shapes do not match the config"));
    }
    return absl::OkStatus();
  };
  if (static_cast<int>(p.combine.size()) != cfg.layers) {
    return absl::InvalidArgumentError("layer count does not match the config");
  }
  for (int k = 1; k <= cfg.layers; ++k) {
    if (absl::Status s =
            check(p.combine[k - 1], 2 * cfg.StateDim(k - 1),
                  cfg.combine_hidden, cfg.feature_dim,
                  absl::StrCat("combine.", k - 1));
        !s.ok()) {
      return s;
    }
  }
  return check(p.readout, cfg.feature_dim, cfg.readout_hidden, cfg.output_dim,
               "readout");
}

template <typename S>
absl::StatusOr<Trace<S>> Run(const RealGraph& g, const NumericParams& p,
                             const NumericConfig& cfg,
                             const PerturbFn<S>* perturb) {
  if (absl::Status s = CheckShapes(p, cfg); !s.ok()) return s;
  if (g.label_dim() != cfg.input_dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("label dimension ", g.label_dim(),
                     " does not match input_dim ", cfg.input_dim));
  }
  const int n = g.num_nodes();
  Trace<S> trace;
  Mat<S> h(cfg.input_dim, n);
  for (NodeId v = 0; v < n; ++v) {
    for (int i = 0; i < cfg.input_dim; ++i) h(i, v) = g.label(v)[i];
  }
  trace.states.push_back(h);
  for (int k = 1; k <= cfg.layers; ++k) {
    const Layer<S> mlp = CastLayer<S>(p.combine[k - 1]);
    const int d = cfg.StateDim(k - 1);
    ComponentCache<S> cache;
    cache.inputs.resize(2 * d, n);
    cache.hidden.resize(cfg.combine_hidden, n);
    Mat<S> next(cfg.feature_dim, n);
    for (NodeId v = 0; v < n; ++v) {
      Vec<S> x(2 * d);
      x.head(d) = h.col(v);
      x.tail(d) = AggregateNeighbors<S>(g, h, v, cfg.aggregate);
      Vec<S> hidden;
      Vec<S> y = ApplyLayer<S>(mlp, cfg.activation, x, &hidden);
      if (perturb != nullptr) (*perturb)(k - 1, x, y);
      cache.inputs.col(v) = x;
      cache.hidden.col(v) = hidden;
      next.col(v) = y;
    }
    h = std::move(next);
    trace.layers.push_back(std::move(cache));
    trace.states.push_back(h);
  }
  const Layer<S> readout = CastLayer<S>(p.readout);
  trace.readout.inputs = h;
  trace.readout.hidden.resize(cfg.readout_hidden, n);
  trace.outputs.resize(cfg.output_dim, n);
  for (NodeId v = 0; v < n; ++v) {
    Vec<S> hidden;
    Vec<S> x = h.col(v);
    Vec<S> y = ApplyLayer<S>(readout, cfg.activation, x, &hidden);
    if (perturb != nullptr) (*perturb)(cfg.layers, x, y);
    trace.readout.hidden.col(v) = hidden;
    trace.outputs.col(v) = y;
  }
  return trace;
}

absl::Status CheckDataset(const NumericDataset& ds, const NumericConfig& cfg) {
  if (ds.items.empty()) return absl::InvalidArgumentError("empty dataset");
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    const NumericItem& item = ds.items[i];
    if (item.graph < 0 || item.graph >= static_cast<int>(ds.graphs.size()) ||
        !ds.graphs[item.graph].contains(item.node)) {
      return absl::InvalidArgumentError(
          absl::StrCat("item ", i, " refers to a missing graph or node"));
    }
    if (item.target.size() != cfg.output_dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("item ", i, ": target dimension ", item.target.size(),
                       " does not match output_dim ", cfg.output_dim));
    }
  }
  return absl::OkStatus();
}

// Per graph, the items that refer to it.
std::vector<std::vector<int>> ItemsByGraph(const NumericDataset& ds) {
  std::vector<std::vector<int>> by_graph(ds.graphs.size());
  for (int i = 0; i < static_cast<int>(ds.items.size()); ++i) {
    by_graph[ds.items[i].graph].push_back(i);
  }
  return by_graph;
}

template <typename S>
absl::StatusOr<S> MeanSquaredError(const NumericDataset& ds,
                                   const NumericParams& p,
                                   const NumericConfig& cfg) {
  if (absl::Status s = CheckDataset(ds, cfg); !s.ok()) return s;
  const auto by_graph = ItemsByGraph(ds);
  S sse = 0;
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    if (by_graph[gi].empty()) continue;
    auto trace = Run<S>(ds.graphs[gi], p, cfg, nullptr);
    if (!trace.ok()) return trace.status();
    for (int i : by_graph[gi]) {
      const NumericItem& item = ds.items[i];
      sse += (trace->outputs.col(item.node) - item.target.cast<S>())
                 .squaredNorm();
    }
  }
  return sse / static_cast<S>(ds.items.size() * cfg.output_dim);
}

Perceptron ZeroPerceptron(const Perceptron& like) {
  return Perceptron{MatrixXd::Zero(like.w1.rows(), like.w1.cols()),
                    VectorXd::Zero(like.b1.size()),
                    MatrixXd::Zero(like.w2.rows(), like.w2.cols()),
                    VectorXd::Zero(like.b2.size())};
}

template <typename Ptr, typename P>
void CollectScalars(P& m, std::vector<Ptr>& out) {
  for (Eigen::Index i = 0; i < m.w1.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.w1.cols(); ++j) out.push_back(&m.w1(i, j));
  }
  for (Eigen::Index i = 0; i < m.b1.size(); ++i) out.push_back(&m.b1(i));
  for (Eigen::Index i = 0; i < m.w2.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.w2.cols(); ++j) out.push_back(&m.w2(i, j));
  }
  for (Eigen::Index i = 0; i < m.b2.size(); ++i) out.push_back(&m.b2(i));
}

double RowNormWithAggregate(const MatrixXd& jacobian, int self_dim,
                            double aggregate_factor) {
  const VectorXd self =
      jacobian.leftCols(self_dim).cwiseAbs().rowwise().sum();
  const VectorXd agg =
      jacobian.rightCols(jacobian.cols() - self_dim).cwiseAbs().rowwise().sum();
  return (self + aggregate_factor * agg).maxCoeff();
}

MatrixXd PerceptronJacobian(const Perceptron& m, Activation act,
                            const VectorXd& x) {
  const VectorXd s = Activate<double>(act, m.w1 * x + m.b1);
  return m.w2 * (ActivationSlope(act, s).asDiagonal() * m.w1);
}

double AggregateFactor(const NumericConfig& cfg, int max_degree) {
  if (max_degree == 0) return 0;
  return cfg.aggregate == AggregateKind::kSum ? max_degree : 1;
}

void Widen(std::vector<Interval>& box, const MatrixXd& columns) {
  for (Eigen::Index i = 0; i < columns.rows(); ++i) {
    box[i].lo = std::min(box[i].lo, columns.row(i).minCoeff());
    box[i].hi = std::max(box[i].hi, columns.row(i).maxCoeff());
  }
}

std::vector<Interval> BoxOf(const MatrixXd& columns) {
  std::vector<Interval> box(columns.rows());
  for (Eigen::Index i = 0; i < columns.rows(); ++i) {
    box[i] = {columns.row(i).minCoeff(), columns.row(i).maxCoeff()};
  }
  return box;
}

double MaxAbsDiff(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// One trial's offset functions.
struct Offset {
  VectorXd amplitude;
  MatrixXd frequency;
  VectorXd phase;
};

Offset DrawOffset(SplitMix64& rng, int out_dim, int in_dim, OffsetKind kind) {
  Offset o;
  o.amplitude.resize(out_dim);
  o.frequency.resize(out_dim, in_dim);
  o.phase.resize(out_dim);
  for (int i = 0; i < out_dim; ++i) {
    o.amplitude(i) = kind == OffsetKind::kSmooth ? rng.Uniform(-1.0, 1.0)
                                                 : rng.Uniform(0.5, 1.0);
    for (int j = 0; j < in_dim; ++j) o.frequency(i, j) = rng.Uniform(-1, 1);
    o.phase(i) = rng.Uniform(0, 2 * std::numbers::pi);
  }
  return o;
}

Json MatrixJson(const std::string& name, const MatrixXd& m) {
  std::vector<double> data;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return Json{{"name", name}, {"shape", {m.rows(), m.cols()}}, {"data", data}};
}

Json VectorJson(const std::string& name, const VectorXd& v) {
  return Json{{"name", name},
              {"shape", {v.size()}},
              {"data", std::vector<double>(v.data(), v.data() + v.size())}};
}

}  // namespace

absl::Status NumericConfig::Validate() const {
  if (input_dim < 1 || feature_dim < 1 || layers < 1 || combine_hidden < 1 ||
      readout_hidden < 1 || output_dim < 1) {
    return absl::InvalidArgumentError(
        "numeric config needs positive dimensions, widths and layer count");
  }
  return absl::OkStatus();
}

NumericParams NumericParams::ZerosLike() const {
  NumericParams z;
  for (const Perceptron& m : combine) z.combine.push_back(ZeroPerceptron(m));
  z.readout = ZeroPerceptron(readout);
  return z;
}

std::vector<double*> NumericParams::Scalars() {
  std::vector<double*> out;
  for (Perceptron& m : combine) CollectScalars(m, out);
  CollectScalars(readout, out);
  return out;
}

std::vector<const double*> NumericParams::Scalars() const {
  std::vector<const double*> out;
  for (const Perceptron& m : combine) CollectScalars(m, out);
  CollectScalars(readout, out);
  return out;
}

absl::StatusOr<NumericParams> InitParams(const NumericConfig& cfg,
                                         std::uint64_t seed) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  NumericParams p;
  auto shaped = [](int in, int hidden, int out) {
    return Perceptron{MatrixXd::Zero(hidden, in), VectorXd::Zero(hidden),
                      MatrixXd::Zero(out, hidden), VectorXd::Zero(out)};
  };
  for (int k = 1; k <= cfg.layers; ++k) {
    p.combine.push_back(
        shaped(2 * cfg.StateDim(k - 1), cfg.combine_hidden, cfg.feature_dim));
  }
  p.readout = shaped(cfg.feature_dim, cfg.readout_hidden, cfg.output_dim);

  SplitMix64 rng(seed);
  auto fill = [&](Perceptron& m) {
    const double s1 = 1.0 / std::sqrt(static_cast<double>(m.w1.cols()));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(m.w2.cols()));
    for (Eigen::Index i = 0; i < m.w1.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.w1.cols(); ++j) {
        m.w1(i, j) = s1 * rng.Uniform(-1, 1);
      }
    }
    for (Eigen::Index i = 0; i < m.b1.size(); ++i) m.b1(i) = s1 * rng.Uniform(-1, 1);
    for (Eigen::Index i = 0; i < m.w2.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.w2.cols(); ++j) {
        m.w2(i, j) = s2 * rng.Uniform(-1, 1);
      }
    }
    for (Eigen::Index i = 0; i < m.b2.size(); ++i) m.b2(i) = s2 * rng.Uniform(-1, 1);
  };
  for (Perceptron& m : p.combine) fill(m);
  fill(p.readout);
  return p;
}

absl::StatusOr<ForwardPass> Forward(const RealGraph& g, const NumericParams& p,
                                    const NumericConfig& cfg) {
  auto trace = Run<double>(g, p, cfg, nullptr);
  if (!trace.ok()) return trace.status();
  return ForwardPass{std::move(trace->states), std::move(trace->outputs)};
}

absl::StatusOr<double> Loss(const NumericDataset& ds, const NumericParams& p,
                            const NumericConfig& cfg) {
  return MeanSquaredError<double>(ds, p, cfg);
}

absl::StatusOr<LossAndGradient> LossAndGrad(const NumericDataset& ds,
                                            const NumericParams& p,
                                            const NumericConfig& cfg) {
  if (absl::Status s = CheckDataset(ds, cfg); !s.ok()) return s;
  const auto by_graph = ItemsByGraph(ds);
  const double scale = 1.0 / static_cast<double>(ds.items.size() * cfg.output_dim);
  LossAndGradient result;
  result.grad = p.ZerosLike();
  double sse = 0;
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    if (by_graph[gi].empty()) continue;
    const RealGraph& g = ds.graphs[gi];
    auto trace = Run<double>(g, p, cfg, nullptr);
    if (!trace.ok()) return trace.status();
    const int n = g.num_nodes();

    MatrixXd grad_h = MatrixXd::Zero(cfg.feature_dim, n);
    for (int i : by_graph[gi]) {
      const NumericItem& item = ds.items[i];
      const VectorXd residual = trace->outputs.col(item.node) - item.target;
      sse += residual.squaredNorm();
      grad_h.col(item.node) += BackwardPerceptron(
          p.readout, cfg.activation, trace->readout.inputs.col(item.node),
          trace->readout.hidden.col(item.node), 2.0 * scale * residual,
          result.grad.readout);
    }
    for (int k = cfg.layers; k >= 1; --k) {
      const ComponentCache<double>& cache = trace->layers[k - 1];
      const int d = cfg.StateDim(k - 1);
      MatrixXd grad_prev = MatrixXd::Zero(d, n);
      for (NodeId v = 0; v < n; ++v) {
        const VectorXd dx = BackwardPerceptron(
            p.combine[k - 1], cfg.activation, cache.inputs.col(v),
            cache.hidden.col(v), grad_h.col(v), result.grad.combine[k - 1]);
        grad_prev.col(v) += dx.head(d);
        if (g.degree(v) == 0) continue;
        const double share = cfg.aggregate == AggregateKind::kMean
                                 ? 1.0 / g.degree(v)
                                 : 1.0;
        for (NodeId u : g.neighbors(v)) grad_prev.col(u) += share * dx.tail(d);
      }
      grad_h = std::move(grad_prev);
    }
  }
  result.mse = sse * scale;
  return result;
}

absl::StatusOr<double> GradCheck(const NumericDataset& ds,
                                 const NumericParams& p,
                                 const NumericConfig& cfg, double h) {
  if (!(h > 0)) return absl::InvalidArgumentError("step must be positive");
  auto analytic = LossAndGrad(ds, p, cfg);
  if (!analytic.ok()) return analytic.status();
  const std::vector<const double*> grads = std::as_const(analytic->grad).Scalars();
  NumericParams probe = p;
  std::vector<double*> scalars = probe.Scalars();
  double worst = 0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    const double saved = *scalars[i];
    const double plus = saved + h;
    const double minus = saved - h;
    *scalars[i] = plus;
    const long double up = *MeanSquaredError<long double>(ds, probe, cfg);
    *scalars[i] = minus;
    const long double down = *MeanSquaredError<long double>(ds, probe, cfg);
    *scalars[i] = saved;
    const double a = *grads[i];
    const double b = static_cast<double>(
        (up - down) / (static_cast<long double>(plus) - minus));
    worst = std::max(worst, std::abs(a - b) /
                                std::max(1e-8, std::abs(a) + std::abs(b)));
  }
  return worst;
}

JacobianBox UniformBox(const NumericConfig& cfg, double lo, double hi) {
  JacobianBox box;
  for (int k = 1; k <= cfg.layers; ++k) {
    box.combine.emplace_back(2 * cfg.StateDim(k - 1), Interval{lo, hi});
  }
  box.readout.assign(cfg.feature_dim, Interval{lo, hi});
  return box;
}

double TransitionJacobianNorm(const Perceptron& mlp, Activation act,
                              const VectorXd& x, int self_dim,
                              double aggregate_factor) {
  return RowNormWithAggregate(PerceptronJacobian(mlp, act, x), self_dim,
                              aggregate_factor);
}

double ReadoutJacobianNorm(const Perceptron& mlp, Activation act,
                           const VectorXd& x) {
  return PerceptronJacobian(mlp, act, x).cwiseAbs().rowwise().sum().maxCoeff();
}

absl::StatusOr<JacobianBound> EstimateJacobianBound(
    const NumericParams& p, const NumericConfig& cfg, const JacobianBox& box,
    int samples, std::uint64_t seed, int max_degree) {
  if (absl::Status s = CheckShapes(p, cfg); !s.ok()) return s;
  if (samples < 1) return absl::InvalidArgumentError("samples must be >= 1");
  if (static_cast<int>(box.combine.size()) != cfg.layers ||
      static_cast<int>(box.readout.size()) != cfg.feature_dim) {
    return absl::InvalidArgumentError("box does not match the config");
  }
  for (int k = 1; k <= cfg.layers; ++k) {
    if (static_cast<int>(box.combine[k - 1].size()) !=
        2 * cfg.StateDim(k - 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("box of layer ", k, " has the wrong dimension"));
    }
  }
  const double factor = AggregateFactor(cfg, max_degree);

  JacobianBound bound;
  if (cfg.activation == Activation::kIdentity) {
    bound.exact = true;
    for (int k = 1; k <= cfg.layers; ++k) {
      const VectorXd x = VectorXd::Zero(2 * cfg.StateDim(k - 1));
      bound.value = std::max(
          bound.value,
          TransitionJacobianNorm(p.combine[k - 1], cfg.activation, x,
                                 cfg.StateDim(k - 1), factor));
    }
    bound.value = std::max(
        bound.value, ReadoutJacobianNorm(p.readout, cfg.activation,
                                         VectorXd::Zero(cfg.feature_dim)));
    return bound;
  }

  auto sample = [](SplitMix64& rng, const std::vector<Interval>& dims) {
    VectorXd x(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      x(i) = rng.Uniform(dims[i].lo, dims[i].hi);
    }
    return x;
  };
  double sup = 0;
  for (int k = 1; k <= cfg.layers; ++k) {
    SplitMix64 rng(seed ^ (0x5851F42D4C957F2DULL * static_cast<std::uint64_t>(k)));
    for (int s = 0; s < samples; ++s) {
      sup = std::max(sup, TransitionJacobianNorm(
                              p.combine[k - 1], cfg.activation,
                              sample(rng, box.combine[k - 1]),
                              cfg.StateDim(k - 1), factor));
    }
  }
  SplitMix64 rng(seed ^ (0x5851F42D4C957F2DULL *
                         static_cast<std::uint64_t>(cfg.layers + 1)));
  for (int s = 0; s < samples; ++s) {
    sup = std::max(sup, ReadoutJacobianNorm(p.readout, cfg.activation,
                                            sample(rng, box.readout)));
  }
  bound.value = kJacobianSafetyFactor * sup;
  return bound;
}

std::string PerturbReport::ToCsv() const {
  std::string csv = "step,observed,bound,violation\n";
  for (std::size_t k = 0; k < observed.size(); ++k) {
    absl::StrAppend(&csv, k + 1, ",", observed[k], ",", bounds[k], ",",
                    observed[k] > bounds[k] ? 1 : 0, "\n");
  }
  absl::StrAppend(&csv, "readout,", readout_observed, ",", readout_bound, ",",
                  readout_observed > readout_bound ? 1 : 0, "\n");
  return csv;
}

absl::StatusOr<PerturbReport> PerturbExperiment(const RealGraph& g,
                                                const NumericParams& p,
                                                const NumericConfig& cfg,
                                                const PerturbOptions& options) {
  if (!(options.eta >= 0)) return absl::InvalidArgumentError("eta must be >= 0");
  if (options.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  auto reference = Run<double>(g, p, cfg, nullptr);
  if (!reference.ok()) return reference.status();
  const int layers = cfg.layers;

  JacobianBox box;
  for (const ComponentCache<double>& c : reference->layers) {
    box.combine.push_back(BoxOf(c.inputs));
  }
  box.readout = BoxOf(reference->readout.inputs);

  std::vector<std::vector<double>> drift(options.trials);
  std::vector<double> readout_drift(options.trials);
  SplitMix64 rng(options.seed);
  for (int t = 0; t < options.trials; ++t) {
    std::vector<Offset> offsets;
    for (int k = 1; k <= layers; ++k) {
      offsets.push_back(DrawOffset(rng, cfg.feature_dim,
                                   2 * cfg.StateDim(k - 1), options.offsets));
    }
    offsets.push_back(
        DrawOffset(rng, cfg.output_dim, cfg.feature_dim, options.offsets));
    const double eta = options.eta;
    const OffsetKind kind = options.offsets;
    PerturbFn<double> perturb = [&](int c, const VectorXd& x, VectorXd& y) {
      const Offset& o = offsets[c];
      if (kind == OffsetKind::kConstantPositive) {
        y += eta * o.amplitude;
      } else {
        y += eta * (o.amplitude.array() *
                    (o.frequency * x + o.phase).array().sin())
                       .matrix();
      }
    };
    auto perturbed = Run<double>(g, p, cfg, &perturb);
    if (!perturbed.ok()) return perturbed.status();
    for (int k = 1; k <= layers; ++k) {
      drift[t].push_back(
          MaxAbsDiff(perturbed->states[k], reference->states[k]));
      Widen(box.combine[k - 1], perturbed->layers[k - 1].inputs);
    }
    Widen(box.readout, perturbed->readout.inputs);
    readout_drift[t] = MaxAbsDiff(perturbed->outputs, reference->outputs);
  }

  auto bound = EstimateJacobianBound(p, cfg, box, options.jacobian_samples,
                                     options.seed, g.max_degree());
  if (!bound.ok()) return bound.status();

  PerturbReport report;
  report.eta = options.eta;
  report.num_nodes = g.num_nodes();
  report.trials = options.trials;
  report.jacobian_bound = *bound;
  const double b = bound->value;
  const double eta_n = options.eta * g.num_nodes();
  double geometric = 0;  // sum_{i<k} B^i
  double power = 1;
  for (int k = 1; k <= layers; ++k) {
    geometric += power;
    power *= b;
    report.bounds.push_back(eta_n * geometric);
  }
  report.readout_bound = eta_n + b * eta_n * geometric;
  report.observed.assign(layers, 0.0);
  for (int t = 0; t < options.trials; ++t) {
    for (int k = 0; k < layers; ++k) {
      report.observed[k] = std::max(report.observed[k], drift[t][k]);
      if (drift[t][k] > report.bounds[k]) ++report.violations;
    }
    report.readout_observed = std::max(report.readout_observed, readout_drift[t]);
    if (readout_drift[t] > report.readout_bound) ++report.violations;
  }
  return report;
}

absl::StatusOr<TrainResult> Train(const NumericDataset& ds,
                                  const NumericConfig& cfg,
                                  const TrainHyper& hyper) {
  if (!(hyper.lr > 0) || hyper.steps < 0) {
    return absl::InvalidArgumentError("need lr > 0 and steps >= 0");
  }
  auto init = InitParams(cfg, hyper.seed);
  if (!init.ok()) return init.status();
  TrainResult result;
  result.params = *std::move(init);
  NumericParams velocity = result.params.ZerosLike();
  std::vector<double*> theta = result.params.Scalars();
  std::vector<double*> vel = velocity.Scalars();
  for (int step = 0; step < hyper.steps; ++step) {
    auto lg = LossAndGrad(ds, result.params, cfg);
    if (!lg.ok()) return lg.status();
    result.history.push_back(lg->mse);
    if (!std::isfinite(lg->mse)) {
      result.diverged = true;
      return result;
    }
    if (lg->mse <= hyper.target_mse) return result;
    const std::vector<const double*> grad = std::as_const(lg->grad).Scalars();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      *vel[i] = hyper.momentum * *vel[i] - hyper.lr * *grad[i];
      *theta[i] += *vel[i];
    }
  }
  auto final_loss = Loss(ds, result.params, cfg);
  if (!final_loss.ok()) return final_loss.status();
  result.history.push_back(*final_loss);
  result.diverged = !std::isfinite(*final_loss);
  return result;
}

std::string SerializeParams(const NumericParams& p, const NumericConfig& cfg) {
  Json config{{"input_dim", cfg.input_dim},
              {"feature_dim", cfg.feature_dim},
              {"layers", cfg.layers},
              {"aggregate", cfg.aggregate == AggregateKind::kSum ? "sum" : "mean"},
              {"combine_hidden", cfg.combine_hidden},
              {"readout_hidden", cfg.readout_hidden},
              {"output_dim", cfg.output_dim},
              {"activation",
               cfg.activation == Activation::kTanh ? "tanh" : "identity"}};
  Json tensors = Json::array();
  auto add = [&](const std::string& prefix, const Perceptron& m) {
    tensors.push_back(MatrixJson(prefix + ".w1", m.w1));
    tensors.push_back(VectorJson(prefix + ".b1", m.b1));
    tensors.push_back(MatrixJson(prefix + ".w2", m.w2));
    tensors.push_back(VectorJson(prefix + ".b2", m.b2));
  };
  for (std::size_t k = 0; k < p.combine.size(); ++k) {
    add(absl::StrCat("combine.", k), p.combine[k]);
  }
  add("readout", p.readout);
  return Json{{"config", std::move(config)}, {"tensors", std::move(tensors)}}
      .dump();
}

absl::StatusOr<std::pair<NumericParams, NumericConfig>> ParseParams(
    std::string_view document) {
  auto doc = ParseJson(document);
  if (!doc.ok()) return doc.status();
  if (!doc->is_object() || !doc->contains("config") ||
      !doc->contains("tensors") || !(*doc)["tensors"].is_array()) {
    return absl::InvalidArgumentError("params need \"config\" and \"tensors\"");
  }
  const Json& c = (*doc)["config"];
  NumericConfig cfg;
  try {
    cfg.input_dim = c.at("input_dim").get<int>();
    cfg.feature_dim = c.at("feature_dim").get<int>();
    cfg.layers = c.at("layers").get<int>();
    cfg.combine_hidden = c.at("combine_hidden").get<int>();
    cfg.readout_hidden = c.at("readout_hidden").get<int>();
    cfg.output_dim = c.at("output_dim").get<int>();
    const std::string agg = c.at("aggregate").get<std::string>();
    const std::string act = c.at("activation").get<std::string>();
    if (agg != "sum" && agg != "mean") {
      return absl::InvalidArgumentError("aggregate must be sum or mean");
    }
    if (act != "tanh" && act != "identity") {
      return absl::InvalidArgumentError("activation must be tanh or identity");
    }
    cfg.aggregate = agg == "sum" ? AggregateKind::kSum : AggregateKind::kMean;
    cfg.activation = act == "tanh" ? Activation::kTanh : Activation::kIdentity;
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad config: ", e.what()));
  }
  auto params = InitParams(cfg, 0);
  if (!params.ok()) return params.status();
  std::vector<double*> scalars = params->Scalars();
  std::size_t next = 0;
  for (const Json& t : (*doc)["tensors"]) {
    if (!t.is_object() || !t.contains("data") || !t["data"].is_array()) {
      return absl::InvalidArgumentError("malformed tensor entry");
    }
    for (const Json& x : t["data"]) {
      if (!x.is_number() || next >= scalars.size()) {
        return absl::InvalidArgumentError("tensor data does not match config");
      }
      *scalars[next++] = x.get<double>();
    }
  }
  if (next != scalars.size()) {
    return absl::InvalidArgumentError("tensor data does not match config");
  }
  return std::pair(*std::move(params), cfg);
}

absl::StatusOr<NumericDataset> ParseNumericDataset(std::string_view document) {
  auto doc = ParseJson(document);
  if (!doc.ok()) return doc.status();
  if (!doc->is_object() || !doc->contains("items") ||
      !(*doc)["items"].is_array()) {
    return absl::InvalidArgumentError("dataset needs an \"items\" array");
  }
  auto graphs = ParseRealCorpus(document);
  if (!graphs.ok()) return graphs.status();
  NumericDataset ds;
  ds.graphs = *std::move(graphs);
  for (const Json& entry : (*doc)["items"]) {
    if (!entry.is_object() || !entry.contains("graph") ||
        !entry["graph"].is_number_integer() || !entry.contains("node") ||
        !entry["node"].is_number_integer() || !entry.contains("target") ||
        !entry["target"].is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed dataset item ", entry.dump()));
    }
    NumericItem item{entry["graph"].get<int>(), entry["node"].get<int>(), {}};
    item.target.resize(entry["target"].size());
    for (std::size_t i = 0; i < entry["target"].size(); ++i) {
      const Json& x = entry["target"][i];
      if (x.is_number()) {
        item.target(i) = x.get<double>();
      } else if (x.is_string()) {
        auto r = ParseRational(x.get<std::string>());
        if (!r.ok()) return r.status();
        item.target(i) = r->convert_to<double>();
      } else {
        return absl::InvalidArgumentError("target entries must be numbers");
      }
    }
    ds.items.push_back(std::move(item));
  }
  return ds;
}

std::string SerializeNumericDataset(const NumericDataset& ds) {
  Json graphs = Json::array();
  for (const RealGraph& g : ds.graphs) {
    graphs.push_back(*ParseJson(SerializeGraph(g)));
  }
  Json items = Json::array();
  for (const NumericItem& item : ds.items) {
    items.push_back(Json{
        {"graph", item.graph},
        {"node", item.node},
        {"target", std::vector<double>(item.target.data(),
                                       item.target.data() + item.target.size())}});
  }
  return Json{{"graphs", std::move(graphs)}, {"items", std::move(items)}}
      .dump();
}

}  // namespace unfoldwl
