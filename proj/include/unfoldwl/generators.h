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

#ifndef UNFOLDWL_GENERATORS_H_
#define UNFOLDWL_GENERATORS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "unfoldwl/graph.h"

namespace unfoldwl {

enum class CycleMarking {
  kNone,          // every label [0]
  kOne,           // node 0 labeled [1], the rest [0]
  kAllDistinct,   // node i labeled [i]
};

// Cycle 0-1-...-(n-1)-0. Requires n >= 3.
absl::StatusOr<Graph> GenCycle(int n, CycleMarking marking);

// Path 0-1-...-(n-1), all labels [0].
absl::StatusOr<Graph> GenPath(int n);

// Erdos-Renyi graph with labels uniform over [0]..[alphabet-1]. Draw order:
// n labels via Below(alphabet), then one NextDouble() per pair (i, j), i < j,
// in lexicographic order; the pair is an edge iff the draw is < edge_prob.
absl::StatusOr<Graph> GenRandomLabeled(int n, double edge_prob, int alphabet,
                                       std::uint64_t seed);

// Circulant `degree`-regular graph on n nodes with all labels [0]: node i is
// joined to i +- 1..degree/2, plus i + n/2 when degree is odd (n even).
absl::StatusOr<Graph> GenCirculant(int n, int degree);

// Reproducible corpus description.
struct CorpusSpec {
  // "random", "cycle-none", "cycle-one", "cycle-distinct", "circulant",
  // "path".
  std::string generator = "random";
  // Node count; "random" draws each graph's size from [min_nodes, max_nodes].
  int max_nodes = 10;
  int min_nodes = 1;
  int count = 500;
  double edge_prob = 0.3;
  int degree = 2;
  int alphabet = 3;
  std::uint64_t seed = 1;
};

// For "random": a SplitMix64 seeded with spec.seed yields, per graph, the
// size (min_nodes + Below(max_nodes - min_nodes + 1)) and then the seed for
// GenRandomLabeled. The deterministic generators repeat their graph.
absl::StatusOr<std::vector<Graph>> GenerateCorpus(const CorpusSpec& spec);

}  // namespace unfoldwl

#endif  // UNFOLDWL_GENERATORS_H_
