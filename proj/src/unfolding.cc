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

#include "unfoldwl/unfolding.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace unfoldwl {

std::vector<UnfoldingTree> UnfoldAll(const Graph& g, int depth) {
  std::vector<UnfoldingTree> level;
  level.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    level.push_back(UnfoldingTree::Leaf(g.label(v)));
  }
  for (int d = 1; d <= depth; ++d) {
    std::vector<UnfoldingTree> next;
    next.reserve(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::vector<UnfoldingTree> children;
      children.reserve(g.degree(v));
      for (NodeId u : g.neighbors(v)) children.push_back(level[u]);
      next.push_back(UnfoldingTree::Make(g.label(v), std::move(children)));
    }
    level = std::move(next);
  }
  return level;
}

absl::StatusOr<UnfoldingTree> Unfold(const Graph& g, NodeId v, int depth) {
  if (!g.contains(v)) {
    return absl::OutOfRangeError(absl::StrCat("node id out of range: ", v));
  }
  if (depth < 0) return absl::InvalidArgumentError("negative depth");
  return UnfoldAll(g, depth)[v];
}

std::vector<TreeCode> UnfoldingCodes(const Graph& g, int depth,
                                     ChildSemantics semantics) {
  std::vector<TreeCode> codes;
  codes.reserve(g.num_nodes());
  for (const UnfoldingTree& t : UnfoldAll(g, depth)) {
    codes.push_back(CanonicalCode(t, semantics));
  }
  return codes;
}

Partition NodeClassesByUnfolding(const Graph& g, int depth,
                                 ChildSemantics semantics) {
  const std::vector<TreeCode> codes = UnfoldingCodes(g, depth, semantics);
  return PartitionByKey<TreeCode>(codes);
}

absl::StatusOr<bool> UnfoldingEquivalent(const Graph& g, NodeId u, NodeId v) {
  if (!g.contains(u) || !g.contains(v)) {
    return absl::OutOfRangeError(
        absl::StrCat("node id out of range: ", g.contains(u) ? v : u));
  }
  if (u == v) return true;
  const std::vector<UnfoldingTree> trees = UnfoldAll(g, Diameter(g) + 1);
  return CanonicalCode(trees[u]) == CanonicalCode(trees[v]);
}

bool GraphsUnfoldingEquivalent(const Graph& g1, const Graph& g2) {
  if (g1.num_nodes() != g2.num_nodes()) return false;
  const int depth = std::max(Diameter(g1), Diameter(g2)) + 1;
  std::vector<TreeCode> a = UnfoldingCodes(g1, depth);
  std::vector<TreeCode> b = UnfoldingCodes(g2, depth);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace unfoldwl
