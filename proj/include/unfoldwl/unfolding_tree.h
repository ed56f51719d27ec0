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

#ifndef UNFOLDWL_UNFOLDING_TREE_H_
#define UNFOLDWL_UNFOLDING_TREE_H_

#include <compare>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "unfoldwl/graph.h"

namespace unfoldwl {

// Immutable rooted labeled tree whose children form an unordered multiset.
// Copies share structure, so the exponentially large trees produced by
// unfolding cyclic graphs are held as DAGs of size O(nodes * depth).
//
// The root label may be VOID (absent); such roots are produced by the
// neighbor-union step of the exact GNN.
class UnfoldingTree {
 public:
  using Label = Graph::Label;

  static UnfoldingTree Leaf(Label label);
  static UnfoldingTree VoidLeaf();
  static UnfoldingTree Make(std::optional<Label> root_label,
                            std::vector<UnfoldingTree> children);

  bool is_void() const { return !node_->label.has_value(); }
  // Requires !is_void().
  const Label& root_label() const { return *node_->label; }
  const std::optional<Label>& maybe_label() const { return node_->label; }
  std::span<const UnfoldingTree> children() const { return node_->children; }
  // Longest root-to-leaf path; 0 for a leaf.
  int height() const { return node_->height; }

  // Same children, root label replaced.
  UnfoldingTree WithRootLabel(std::optional<Label> label) const;

  // Address of the shared node. Equal identities imply equal trees; the
  // converse does not hold.
  const void* identity() const { return node_.get(); }

 private:
  struct Node {
    std::optional<Label> label;
    std::vector<UnfoldingTree> children;
    int height = 0;
  };

  explicit UnfoldingTree(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Number of vertices of the fully expanded tree.
BigInt TreeSize(const UnfoldingTree& t);

// Depth-`depth` truncation: every vertex deeper than `depth` is dropped.
UnfoldingTree Truncate(const UnfoldingTree& t, int depth);

// Injective code of a canonical unfolding tree: a non-negative integer.
class TreeCode {
 public:
  TreeCode() = default;
  explicit TreeCode(BigInt value) : value_(std::move(value)) {}

  const BigInt& value() const { return value_; }
  std::string ToString() const { return value_.str(); }
  static absl::StatusOr<TreeCode> FromString(std::string_view decimal);

  friend bool operator==(const TreeCode&, const TreeCode&) = default;
  friend std::strong_ordering operator<=>(const TreeCode& a,
                                          const TreeCode& b) {
    return a.value_ == b.value_ ? std::strong_ordering::equal
           : a.value_ < b.value_ ? std::strong_ordering::less
                                 : std::strong_ordering::greater;
  }

 private:
  BigInt value_;
};

// How the canonicalizer treats repeated children. kSet collapses identical
// sibling subtrees and exists only as a deliberately broken variant for
// mutation testing.
enum class ChildSemantics { kMultiset, kSet };

// AHU-style canonical code.
//
// Distinct subtrees are grouped by height. Level by level, each subtree is
// described by (root label or VOID, ascending ids of its children's classes);
// the distinct descriptions of a level are sorted and numbered consecutively,
// continuing after the previous level. The code is the byte serialization of
// this table fed into a big integer behind a 0x01 sentinel byte:
//
//   varint(levels)
//   per level: varint(count), then per class
//     tag byte (0 = VOID, 1 = labeled)
//     labeled: varint(dimension), zigzag varint per entry
//     varint(#children), varint per child class id
//
// The top level holds exactly one class, the root. Equal codes hold exactly
// for isomorphic labeled trees.
TreeCode CanonicalCode(const UnfoldingTree& t,
                       ChildSemantics semantics = ChildSemantics::kMultiset);

// Inverse of CanonicalCode. Rejects any integer that is not exactly the
// canonical code of some tree.
absl::StatusOr<UnfoldingTree> DecodeTreeCode(const TreeCode& code);

// Equal trees with children rearranged in canonical order.
UnfoldingTree CanonicalForm(const UnfoldingTree& t);

// {"label":[...]|"VOID","children":[...]}, children in canonical order.
std::string TreeToJson(const UnfoldingTree& t);

}  // namespace unfoldwl

#endif  // UNFOLDWL_UNFOLDING_TREE_H_
