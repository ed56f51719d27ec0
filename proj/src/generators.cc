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

#include "unfoldwl/generators.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unfoldwl/rng.h"

namespace unfoldwl {

absl::StatusOr<Graph> GenCycle(int n, CycleMarking marking) {
  if (n < 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("cycle needs at least 3 nodes, got ", n));
  }
  std::vector<Graph::Label> labels(n, Graph::Label{0});
  if (marking == CycleMarking::kOne) labels[0] = {1};
  if (marking == CycleMarking::kAllDistinct) {
    for (int i = 0; i < n; ++i) labels[i] = {i};
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::Create(std::move(labels), std::move(edges));
}

absl::StatusOr<Graph> GenPath(int n) {
  if (n < 1) return absl::InvalidArgumentError("path needs at least 1 node");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::Create(std::vector<Graph::Label>(n, Graph::Label{0}),
                       std::move(edges));
}

absl::StatusOr<Graph> GenRandomLabeled(int n, double edge_prob, int alphabet,
                                       std::uint64_t seed) {
  if (n < 1) return absl::InvalidArgumentError("graph needs at least 1 node");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("edge probability outside [0,1]: ", edge_prob));
  }
  if (alphabet < 1) return absl::InvalidArgumentError("alphabet must be >= 1");
  SplitMix64 rng(seed);
  std::vector<Graph::Label> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    labels.push_back({BigInt(rng.Below(static_cast<std::uint64_t>(alphabet)))});
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.NextDouble() < edge_prob) edges.emplace_back(i, j);
    }
  }
  return Graph::Create(std::move(labels), std::move(edges));
}

absl::StatusOr<Graph> GenCirculant(int n, int degree) {
  if (degree < 0 || degree >= n) {
    return absl::InvalidArgumentError(
        absl::StrCat("circulant degree must be in [0, n), got ", degree));
  }
  if (degree % 2 == 1 && n % 2 == 1) {
    return absl::InvalidArgumentError("odd degree needs an even node count");
  }
  // degree < n keeps every offset k below n/2, so no edge repeats.
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= degree / 2; ++k) edges.emplace_back(i, (i + k) % n);
    if (degree % 2 == 1 && i < n / 2) edges.emplace_back(i, i + n / 2);
  }
  return Graph::Create(std::vector<Graph::Label>(n, Graph::Label{0}),
                       std::move(edges));
}

absl::StatusOr<std::vector<Graph>> GenerateCorpus(const CorpusSpec& spec) {
  if (spec.count < 0) return absl::InvalidArgumentError("negative count");
  std::vector<Graph> corpus;
  corpus.reserve(spec.count);
  if (spec.generator == "random") {
    if (spec.min_nodes < 1 || spec.max_nodes < spec.min_nodes) {
      return absl::InvalidArgumentError("need 1 <= min_nodes <= max_nodes");
    }
    SplitMix64 rng(spec.seed);
    for (int i = 0; i < spec.count; ++i) {
      const int n = spec.min_nodes + static_cast<int>(rng.Below(
                        static_cast<std::uint64_t>(spec.max_nodes -
                                                   spec.min_nodes + 1)));
      auto g = GenRandomLabeled(n, spec.edge_prob, spec.alphabet, rng.Next());
      if (!g.ok()) return g.status();
      corpus.push_back(*std::move(g));
    }
    return corpus;
  }
  absl::StatusOr<Graph> g = absl::InvalidArgumentError(
      absl::StrCat("unknown generator \"", spec.generator, "\""));
  if (spec.generator == "cycle-none") {
    g = GenCycle(spec.max_nodes, CycleMarking::kNone);
  } else if (spec.generator == "cycle-one") {
    g = GenCycle(spec.max_nodes, CycleMarking::kOne);
  } else if (spec.generator == "cycle-distinct") {
    g = GenCycle(spec.max_nodes, CycleMarking::kAllDistinct);
  } else if (spec.generator == "circulant") {
    g = GenCirculant(spec.max_nodes, spec.degree);
  } else if (spec.generator == "path") {
    g = GenPath(spec.max_nodes);
  }
  if (!g.ok()) return g.status();
  corpus.assign(spec.count, *g);
  return corpus;
}

}  // namespace unfoldwl
