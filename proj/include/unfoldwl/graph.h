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

#ifndef UNFOLDWL_GRAPH_H_
#define UNFOLDWL_GRAPH_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace unfoldwl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

// Simple undirected node-labeled graph. Node ids are 0..num_nodes()-1, edges
// are stored as normalized (min, max) pairs, self-loops are allowed and
// duplicate edges are rejected at construction. Every label has the same
// dimension, which is at least 1.
//
// `Scalar` is `BigInt` for exact graphs and `double` for the numeric model.
template <typename Scalar>
class BasicGraph {
 public:
  using Label = std::vector<Scalar>;

  static absl::StatusOr<BasicGraph> Create(std::vector<Label> labels,
                                           std::vector<Edge> edges);

  int num_nodes() const { return static_cast<int>(labels_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int label_dim() const { return static_cast<int>(labels_.front().size()); }

  const Label& label(NodeId v) const { return labels_[v]; }
  const std::vector<Label>& labels() const { return labels_; }

  // Sorted ascending; contains v itself iff v carries a self-loop.
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }
  int degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const;

  bool contains(NodeId v) const { return v >= 0 && v < num_nodes(); }

  // Sorted, normalized edge list.
  const std::vector<Edge>& edges() const { return edges_; }

  friend bool operator==(const BasicGraph&, const BasicGraph&) = default;

 private:
  BasicGraph() = default;

  std::vector<Label> labels_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<NodeId> adjacency_;
};

using Graph = BasicGraph<BigInt>;
using RealGraph = BasicGraph<double>;

template <typename Scalar>
absl::StatusOr<BasicGraph<Scalar>> BasicGraph<Scalar>::Create(
    std::vector<Label> labels, std::vector<Edge> edges) {
  if (labels.empty()) {
    return absl::InvalidArgumentError("graph has no nodes");
  }
  const std::size_t dim = labels.front().size();
  if (dim == 0) return absl::InvalidArgumentError("label dimension is 0");
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v].size() != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("inconsistent label dimension at node ", v, ": ",
                       labels[v].size(), " vs ", dim));
    }
  }
  const int n = static_cast<int>(labels.size());
  for (Edge& e : edges) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) {
      return absl::InvalidArgumentError(absl::StrCat(
          "node id out of range in edge [", e.first, ",", e.second, "]"));
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end());
      dup != edges.end()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "duplicate edge [", dup->first, ",", dup->second, "]"));
  }

  BasicGraph g;
  g.labels_ = std::move(labels);
  g.edges_ = std::move(edges);
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [a, b] : g.edges_) {
    adj[a].push_back(b);
    if (a != b) adj[b].push_back(a);
  }
  g.offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end());
    g.offsets_[v + 1] = g.offsets_[v] + static_cast<int>(adj[v].size());
    g.adjacency_.insert(g.adjacency_.end(), adj[v].begin(), adj[v].end());
  }
  return g;
}

template <typename Scalar>
int BasicGraph<Scalar>::max_degree() const {
  int best = 0;
  for (NodeId v = 0; v < num_nodes(); ++v) best = std::max(best, degree(v));
  return best;
}

// Checked neighbor lookup.
template <typename Scalar>
absl::StatusOr<std::vector<NodeId>> Neighbors(const BasicGraph<Scalar>& g,
                                              NodeId v) {
  if (!g.contains(v)) {
    return absl::OutOfRangeError(absl::StrCat("node id out of range: ", v));
  }
  auto span = g.neighbors(v);
  return std::vector<NodeId>(span.begin(), span.end());
}

// Shortest-path distances from `source`; -1 for unreachable nodes.
template <typename Scalar>
std::vector<int> BfsDistances(const BasicGraph<Scalar>& g, NodeId source) {
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<NodeId> queue = {source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId u : g.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

// Largest finite eccentricity over all nodes, i.e. the maximum component
// diameter for disconnected graphs.
template <typename Scalar>
int Diameter(const BasicGraph<Scalar>& g) {
  int best = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (int d : BfsDistances(g, v)) best = std::max(best, d);
  }
  return best;
}

// Relabels nodes: node v of `g` becomes node perm[v] of the result.
template <typename Scalar>
BasicGraph<Scalar> PermuteNodes(const BasicGraph<Scalar>& g,
                                std::span<const NodeId> perm) {
  std::vector<typename BasicGraph<Scalar>::Label> labels(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) labels[perm[v]] = g.label(v);
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const auto& [a, b] : g.edges()) edges.emplace_back(perm[a], perm[b]);
  return *BasicGraph<Scalar>::Create(std::move(labels), std::move(edges));
}

// Same structure with labels replaced.
template <typename Scalar>
absl::StatusOr<BasicGraph<Scalar>> WithLabels(
    const BasicGraph<Scalar>& g,
    std::vector<typename BasicGraph<Scalar>::Label> labels) {
  if (static_cast<int>(labels.size()) != g.num_nodes()) {
    return absl::InvalidArgumentError("label count does not match node count");
  }
  return BasicGraph<Scalar>::Create(std::move(labels), g.edges());
}

RealGraph ToRealGraph(const Graph& g);

// ---------------------------------------------------------------------------
// Label quantization: reals in [-bound, bound] are mapped to the index of the
// width-`interval_width` cell containing them. Cell i is
// [-bound + i*w, -bound + (i+1)*w); the final cell is closed at `bound`.

struct QuantizerConfig {
  double bound = 1.0;
  double interval_width = 0.1;
};

absl::StatusOr<BigInt> QuantizeValue(double z, const QuantizerConfig& cfg);
absl::StatusOr<Graph> QuantizeLabels(const RealGraph& g,
                                     const QuantizerConfig& cfg);

// ---------------------------------------------------------------------------
// Graph JSON:
//   {"nodes":[{"id":0,"label":[0]},...],"edges":[[0,1],...]}
// Exact graphs require integer label entries. Integers beyond 64 bits may be
// given as decimal strings and are written back that way.

absl::StatusOr<Graph> ParseGraph(std::string_view document);
absl::StatusOr<RealGraph> ParseRealGraph(std::string_view document);
std::string SerializeGraph(const Graph& g);
std::string SerializeGraph(const RealGraph& g);

// A corpus document is {"graphs":[<graph>,...]}. A bare graph document is
// accepted as a corpus of one.
absl::StatusOr<std::vector<Graph>> ParseCorpus(std::string_view document);
absl::StatusOr<std::vector<RealGraph>> ParseRealCorpus(
    std::string_view document);
std::string SerializeCorpus(std::span<const Graph> graphs);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace unfoldwl

#endif  // UNFOLDWL_GRAPH_H_
