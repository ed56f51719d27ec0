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

#ifndef UNFOLDWL_EXACT_GNN_H_
#define UNFOLDWL_EXACT_GNN_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "unfoldwl/graph.h"
#include "unfoldwl/unfolding_tree.h"

namespace unfoldwl {

// Message passing whose node state is a single integer: the code of the
// node's unfolding tree at the current step.
//
//   h_v^0 = code(Tree(l_v))
//   h_v^k = Combine(h_v^{k-1}, Aggregate({h_u^{k-1} : u in ne[v]}))
//
// Aggregate decodes the neighbor trees and hangs them under a VOID root;
// Combine copies the node's own root label onto that VOID root (ATTACH).

inline TreeCode EncodeTree(const UnfoldingTree& t) { return CanonicalCode(t); }
inline absl::StatusOr<UnfoldingTree> DecodeTree(const TreeCode& c) {
  return DecodeTreeCode(c);
}

// Code of a VOID-rooted tree with the decoded inputs as children. The empty
// multiset yields the VOID leaf.
absl::StatusOr<TreeCode> AggregateExact(std::span<const TreeCode> codes);

// Code of `agg`'s tree with its VOID root label replaced by the root label of
// `prev`'s tree. Fails unless `agg` is VOID-rooted.
absl::StatusOr<TreeCode> CombineExact(const TreeCode& prev,
                                      const TreeCode& agg);

// Node states h^0..h^steps; result[k][v] = h_v^k.
std::vector<std::vector<TreeCode>> RunExactGnn(const Graph& g, int steps);

using Target = std::vector<Rational>;

struct DatasetItem {
  int graph = 0;
  NodeId node = 0;
  Target target;
};

// Node-level supervision over a finite set of graphs.
struct Dataset {
  std::vector<Graph> graphs;
  std::vector<DatasetItem> items;

  // Largest diameter over the graphs.
  int MaxDiameter() const;
};

struct TargetViolation {
  int item_a = 0;
  int item_b = 0;
  NodeId node_a = 0;
  NodeId node_b = 0;
};

// ok (nullopt) iff items with equal depth-(r+1) unfolding trees have equal
// targets. Also fails on malformed items.
absl::StatusOr<std::optional<TargetViolation>> ValidateTarget(
    const Dataset& ds);

struct ExactGnnProgram {
  int steps = 0;
  std::map<TreeCode, Target> readout;
  Target default_output;
};

// Readout table over depth-(r+1) codes. Refuses targets that do not respect
// unfolding equivalence.
absl::StatusOr<ExactGnnProgram> ConstructGnn(const Dataset& ds);

// Output for every node of g, respectively for node v.
std::vector<Target> EvaluateAll(const ExactGnnProgram& p, const Graph& g);
absl::StatusOr<Target> Evaluate(const ExactGnnProgram& p, const Graph& g,
                                NodeId v);

// {"steps":K,"readout":[{"code":"<decimal>","out":["p/q",...]}],
//  "default":["0",...]}
std::string SerializeProgram(const ExactGnnProgram& p);
absl::StatusOr<ExactGnnProgram> ParseProgram(std::string_view document);

// {"graphs":[<graph>,...],"items":[{"graph":g,"node":v,"target":["p/q"]}]}
std::string SerializeDataset(const Dataset& ds);
absl::StatusOr<Dataset> ParseDataset(std::string_view document);

}  // namespace unfoldwl

#endif  // UNFOLDWL_EXACT_GNN_H_
