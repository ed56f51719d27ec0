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

#ifndef UNFOLDWL_UNFOLDING_H_
#define UNFOLDWL_UNFOLDING_H_

#include <vector>

#include "absl/status/statusor.h"
#include "unfoldwl/graph.h"
#include "unfoldwl/partition.h"
#include "unfoldwl/unfolding_tree.h"

namespace unfoldwl {

// Depth-`depth` unfolding trees of every node, with subtrees shared between
// nodes: T_v^0 = Tree(l_v) and T_v^d = Tree(l_v, {T_u^{d-1} : u in ne[v]}),
// one child per neighbor.
std::vector<UnfoldingTree> UnfoldAll(const Graph& g, int depth);

absl::StatusOr<UnfoldingTree> Unfold(const Graph& g, NodeId v, int depth);

// Canonical code of every node's depth-`depth` unfolding tree.
std::vector<TreeCode> UnfoldingCodes(
    const Graph& g, int depth,
    ChildSemantics semantics = ChildSemantics::kMultiset);

// Nodes grouped by equal depth-`depth` unfolding trees.
Partition NodeClassesByUnfolding(
    const Graph& g, int depth,
    ChildSemantics semantics = ChildSemantics::kMultiset);

// Depth diameter+1 suffices to decide unfolding equivalence.
absl::StatusOr<bool> UnfoldingEquivalent(const Graph& g, NodeId u, NodeId v);

// Equal multisets of depth-(r+1) codes, r the larger diameter.
bool GraphsUnfoldingEquivalent(const Graph& g1, const Graph& g2);

}  // namespace unfoldwl

#endif  // UNFOLDWL_UNFOLDING_H_
