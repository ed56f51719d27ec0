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

#ifndef UNFOLDWL_SUITE_H_
#define UNFOLDWL_SUITE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "unfoldwl/bridge.h"
#include "unfoldwl/exact_gnn.h"
#include "unfoldwl/generators.h"
#include "unfoldwl/graph.h"

namespace unfoldwl {

// One rational target per node, a pseudo-random function of the node's
// depth-(r+1) unfolding code: k / 1024 with k < 2^20 taken from a hash of the
// code and the seed. Items refer to graph index 0.
std::vector<DatasetItem> GenEquivalenceRespectingTargets(const Graph& g,
                                                         std::uint64_t seed);

// Same construction over several graphs, r the largest diameter. Every node
// of every graph becomes an item.
Dataset GenEquivalenceRespectingDataset(std::vector<Graph> graphs,
                                        std::uint64_t seed);

enum class Mutant {
  kNone,
  // WL keyed by a 2-bit digest of (color, neighbor colors).
  kCollidingHash,
  // Unfolding trees compared with children as a set.
  kSetChildren,
};

absl::StatusOr<Mutant> ParseMutant(std::string_view name);
BridgeOptions BridgeOptionsFor(Mutant mutant);

// Check names, in execution order.
inline constexpr std::string_view kAllChecks[] = {
    "stepwise",    "node_theorem", "graph_theorem",
    "convergence", "depth_sufficiency", "exact_gnn",
    "construct",   "numeric_equivariance", "perturbation"};

// Comma-separated check names, or "all".
absl::StatusOr<std::vector<std::string>> ParseCheckList(std::string_view list);

struct SuiteOptions {
  std::vector<std::string> checks{std::begin(kAllChecks),
                                  std::end(kAllChecks)};
  Mutant mutant = Mutant::kNone;
  std::uint64_t seed = 1;
  // graph_theorem: random corpus pairs plus permuted copies.
  int random_pairs = 250;
  int constructed_pairs = 50;
  // construct: datasets of up to three consecutive corpus graphs.
  int construct_datasets = 50;
  // perturbation: leading corpus graphs, each with a smooth and an affine
  // model at eta 1e-3 and 1e-2.
  int perturb_graphs = 10;
  int perturb_trials = 100;
};

struct SuiteFailure {
  // Index of the (first) corpus graph involved, or of the dataset or pair.
  int item = 0;
  std::string detail;
};

struct CheckResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  double seconds = 0;
  std::vector<SuiteFailure> failures;
  // Extra tabulated quantities, e.g. how many graphs converge within r.
  std::map<std::string, double> stats;
};

struct SuiteReport {
  int corpus_size = 0;
  std::vector<CheckResult> checks;

  bool ok() const;
  int total_failures() const;
  const CheckResult* Find(std::string_view name) const;
  std::string ToJson(bool include_timings = true) const;
  // check,passed,failed,seconds
  std::string ToCsv() const;
};

SuiteReport RunSuite(const std::vector<Graph>& corpus,
                     const SuiteOptions& options = {});
absl::StatusOr<SuiteReport> RunSuite(const CorpusSpec& spec,
                                     const SuiteOptions& options = {});

}  // namespace unfoldwl

#endif  // UNFOLDWL_SUITE_H_
