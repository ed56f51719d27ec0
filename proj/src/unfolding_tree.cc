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

#include "unfoldwl/unfolding_tree.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unfoldwl/json_util.h"

namespace unfoldwl {
namespace {

using ClassId = std::uint32_t;

// ---------------------------------------------------------------------------
// Byte-level token stream.

class ByteWriter {
 public:
  void Byte(std::uint8_t b) { bytes_.push_back(b); }

  void Varint(std::uint64_t x) {
    while (x >= 0x80) {
      bytes_.push_back(static_cast<std::uint8_t>(x | 0x80));
      x >>= 7;
    }
    bytes_.push_back(static_cast<std::uint8_t>(x));
  }

  void BigVarint(BigInt x) {
    if (x <= std::numeric_limits<std::uint64_t>::max()) {
      Varint(static_cast<std::uint64_t>(x));
      return;
    }
    while (x >= 0x80) {
      bytes_.push_back(static_cast<std::uint8_t>((x & 0x7f) | 0x80));
      x >>= 7;
    }
    bytes_.push_back(static_cast<std::uint8_t>(x));
  }

  // Zigzag: 0, -1, 1, -2, ... -> 0, 1, 2, 3, ...
  void SignedBig(const BigInt& x) {
    if (x >= 0) {
      BigVarint(x << 1);
    } else {
      BigVarint(((-x) << 1) - 1);
    }
  }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  absl::StatusOr<std::uint8_t> Byte() {
    if (done()) return Truncated();
    return bytes_[pos_++];
  }

  absl::StatusOr<std::uint64_t> Varint() {
    std::uint64_t x = 0;
    for (int shift = 0;; shift += 7) {
      if (done()) return Truncated();
      const std::uint8_t b = bytes_[pos_++];
      if (shift == 63 && (b & 0x7e) != 0) {
        return absl::InvalidArgumentError("tree code: varint overflow");
      }
      x |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if ((b & 0x80) == 0) {
        if (b == 0 && shift > 0) return NonMinimal();
        return x;
      }
      if (shift == 63) {
        return absl::InvalidArgumentError("tree code: varint overflow");
      }
    }
  }

  absl::StatusOr<BigInt> BigVarint() {
    BigInt x = 0;
    for (unsigned shift = 0;; shift += 7) {
      if (done()) return Truncated();
      const std::uint8_t b = bytes_[pos_++];
      x |= BigInt(b & 0x7f) << shift;
      if ((b & 0x80) == 0) {
        if (b == 0 && shift > 0) return NonMinimal();
        return x;
      }
    }
  }

  absl::StatusOr<BigInt> SignedBig() {
    auto z = BigVarint();
    if (!z.ok()) return z.status();
    if ((*z & 1) == 0) return BigInt(*z >> 1);
    return BigInt(-((*z + 1) >> 1));
  }

 private:
  static absl::Status Truncated() {
    return absl::InvalidArgumentError("tree code: truncated");
  }
  static absl::Status NonMinimal() {
    return absl::InvalidArgumentError("tree code: non-minimal varint");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

BigInt BytesToInteger(const std::vector<std::uint8_t>& bytes) {
  BigInt value;
  boost::multiprecision::import_bits(value, bytes.begin(), bytes.end(), 8);
  return value;
}

std::vector<std::uint8_t> IntegerToBytes(const BigInt& value) {
  std::vector<std::uint8_t> bytes;
  boost::multiprecision::export_bits(value, std::back_inserter(bytes), 8);
  return bytes;
}

// ---------------------------------------------------------------------------
// Level-wise class assignment.

// Description of one subtree class: root label (null for VOID) and the
// sorted class ids of its children.
struct Description {
  const UnfoldingTree::Label* label = nullptr;
  std::vector<ClassId> children;
};

int CompareLabels(const UnfoldingTree::Label& a,
                  const UnfoldingTree::Label& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

int Compare(const Description& a, const Description& b) {
  if ((a.label == nullptr) != (b.label == nullptr)) {
    return a.label == nullptr ? -1 : 1;
  }
  if (a.label != nullptr) {
    if (int c = CompareLabels(*a.label, *b.label); c != 0) return c;
  }
  if (a.children != b.children) return a.children < b.children ? -1 : 1;
  return 0;
}

struct ClassTable {
  // Per level, the distinct descriptions in ascending order. Class ids are
  // consecutive across levels.
  std::vector<std::vector<Description>> levels;
  // Class of every distinct shared node reachable from the root.
  std::unordered_map<const void*, ClassId> class_of;
};

void CollectByHeight(const UnfoldingTree& t,
                     std::unordered_map<const void*, bool>& seen,
                     std::vector<std::vector<const UnfoldingTree*>>& out) {
  if (!seen.emplace(t.identity(), true).second) return;
  for (const UnfoldingTree& c : t.children()) CollectByHeight(c, seen, out);
  out[t.height()].push_back(&t);
}

ClassTable BuildClassTable(const UnfoldingTree& root,
                           ChildSemantics semantics) {
  std::vector<std::vector<const UnfoldingTree*>> by_height(root.height() + 1);
  {
    std::unordered_map<const void*, bool> seen;
    CollectByHeight(root, seen, by_height);
  }
  ClassTable table;
  ClassId next = 0;
  for (const auto& level : by_height) {
    std::vector<Description> descs;
    descs.reserve(level.size());
    for (const UnfoldingTree* t : level) {
      Description d;
      if (!t->is_void()) d.label = &t->root_label();
      d.children.reserve(t->children().size());
      for (const UnfoldingTree& c : t->children()) {
        d.children.push_back(table.class_of.at(c.identity()));
      }
      std::sort(d.children.begin(), d.children.end());
      if (semantics == ChildSemantics::kSet) {
        d.children.erase(std::unique(d.children.begin(), d.children.end()),
                         d.children.end());
      }
      descs.push_back(std::move(d));
    }
    std::vector<std::size_t> order(descs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return Compare(descs[a], descs[b]) < 0;
    });
    std::vector<Description> unique;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t k = order[i];
      if (unique.empty() || Compare(unique.back(), descs[k]) != 0) {
        unique.push_back(descs[k]);
        ++next;
      }
      table.class_of[level[k]->identity()] = next - 1;
    }
    table.levels.push_back(std::move(unique));
  }
  return table;
}

UnfoldingTree CanonicalFormImpl(
    const UnfoldingTree& t, const ClassTable& table,
    std::unordered_map<const void*, UnfoldingTree>& memo) {
  if (auto it = memo.find(t.identity()); it != memo.end()) return it->second;
  std::vector<std::pair<ClassId, UnfoldingTree>> keyed;
  keyed.reserve(t.children().size());
  for (const UnfoldingTree& c : t.children()) {
    keyed.emplace_back(table.class_of.at(c.identity()),
                       CanonicalFormImpl(c, table, memo));
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<UnfoldingTree> children;
  children.reserve(keyed.size());
  for (auto& [id, c] : keyed) children.push_back(std::move(c));
  UnfoldingTree out = UnfoldingTree::Make(t.maybe_label(), std::move(children));
  memo.emplace(t.identity(), out);
  return out;
}

Json TreeJson(const UnfoldingTree& t) {
  Json label;
  if (t.is_void()) {
    label = "VOID";
  } else {
    label = Json::array();
    for (const BigInt& x : t.root_label()) label.push_back(BigIntToJson(x));
  }
  Json children = Json::array();
  for (const UnfoldingTree& c : t.children()) children.push_back(TreeJson(c));
  return Json{{"label", std::move(label)}, {"children", std::move(children)}};
}

}  // namespace

// ---------------------------------------------------------------------------

UnfoldingTree UnfoldingTree::Leaf(Label label) {
  return Make(std::move(label), {});
}

UnfoldingTree UnfoldingTree::VoidLeaf() { return Make(std::nullopt, {}); }

UnfoldingTree UnfoldingTree::Make(std::optional<Label> root_label,
                                  std::vector<UnfoldingTree> children) {
  auto node = std::make_shared<Node>();
  node->label = std::move(root_label);
  int height = 0;
  for (const UnfoldingTree& c : children) {
    height = std::max(height, c.height() + 1);
  }
  node->children = std::move(children);
  node->height = height;
  return UnfoldingTree(std::move(node));
}

UnfoldingTree UnfoldingTree::WithRootLabel(std::optional<Label> label) const {
  auto node = std::make_shared<Node>(*node_);
  node->label = std::move(label);
  return UnfoldingTree(std::move(node));
}

BigInt TreeSize(const UnfoldingTree& t) {
  std::unordered_map<const void*, BigInt> memo;
  auto size = [&](auto& self, const UnfoldingTree& x) -> BigInt {
    if (auto it = memo.find(x.identity()); it != memo.end()) return it->second;
    BigInt total = 1;
    for (const UnfoldingTree& c : x.children()) total += self(self, c);
    memo.emplace(x.identity(), total);
    return total;
  };
  return size(size, t);
}

UnfoldingTree Truncate(const UnfoldingTree& t, int depth) {
  std::vector<std::unordered_map<const void*, UnfoldingTree>> memo(depth + 1);
  auto cut = [&](auto& self, const UnfoldingTree& x, int d) -> UnfoldingTree {
    if (auto it = memo[d].find(x.identity()); it != memo[d].end()) {
      return it->second;
    }
    std::vector<UnfoldingTree> children;
    if (d > 0) {
      for (const UnfoldingTree& c : x.children()) {
        children.push_back(self(self, c, d - 1));
      }
    }
    UnfoldingTree out = UnfoldingTree::Make(x.maybe_label(), std::move(children));
    memo[d].emplace(x.identity(), out);
    return out;
  };
  return cut(cut, t, depth);
}

absl::StatusOr<TreeCode> TreeCode::FromString(std::string_view decimal) {
  if (decimal.empty()) return absl::InvalidArgumentError("empty tree code");
  for (char c : decimal) {
    if (c < '0' || c > '9') {
      return absl::InvalidArgumentError(
          absl::StrCat("tree code is not a decimal natural: \"", std::string(decimal),
                       "\""));
    }
  }
  return TreeCode(BigInt(std::string(decimal)));
}

TreeCode CanonicalCode(const UnfoldingTree& t, ChildSemantics semantics) {
  const ClassTable table = BuildClassTable(t, semantics);
  ByteWriter out;
  out.Byte(0x01);
  out.Varint(table.levels.size());
  for (const auto& level : table.levels) {
    out.Varint(level.size());
    for (const Description& d : level) {
      if (d.label == nullptr) {
        out.Byte(0);
      } else {
        out.Byte(1);
        out.Varint(d.label->size());
        for (const BigInt& x : *d.label) out.SignedBig(x);
      }
      out.Varint(d.children.size());
      for (ClassId c : d.children) out.Varint(c);
    }
  }
  return TreeCode(BytesToInteger(out.bytes()));
}

absl::StatusOr<UnfoldingTree> DecodeTreeCode(const TreeCode& code) {
  const std::vector<std::uint8_t> bytes = IntegerToBytes(code.value());
  if (bytes.empty() || bytes.front() != 0x01) {
    return absl::InvalidArgumentError("tree code: missing sentinel");
  }
  ByteReader in(std::span<const std::uint8_t>(bytes).subspan(1));

  auto levels = in.Varint();
  if (!levels.ok()) return levels.status();
  if (*levels == 0) return absl::InvalidArgumentError("tree code: no levels");

  // Decoded classes, their descriptions (for canonical-order checks) and
  // labels (owned here so Description can point at them).
  std::vector<UnfoldingTree> classes;
  std::vector<std::optional<UnfoldingTree::Label>> labels;
  std::vector<Description> descs;
  std::vector<int> level_of;
  for (std::uint64_t h = 0; h < *levels; ++h) {
    auto count = in.Varint();
    if (!count.ok()) return count.status();
    if (*count == 0) {
      return absl::InvalidArgumentError("tree code: empty level");
    }
    if (h + 1 == *levels && *count != 1) {
      return absl::InvalidArgumentError("tree code: top level must be a root");
    }
    const std::size_t level_start = classes.size();
    for (std::uint64_t i = 0; i < *count; ++i) {
      if (classes.size() > bytes.size()) {
        return absl::InvalidArgumentError("tree code: class count too large");
      }
      auto tag = in.Byte();
      if (!tag.ok()) return tag.status();
      std::optional<UnfoldingTree::Label> label;
      if (*tag == 1) {
        auto dim = in.Varint();
        if (!dim.ok()) return dim.status();
        if (*dim == 0 || *dim > bytes.size()) {
          return absl::InvalidArgumentError("tree code: bad label dimension");
        }
        label.emplace();
        for (std::uint64_t j = 0; j < *dim; ++j) {
          auto x = in.SignedBig();
          if (!x.ok()) return x.status();
          label->push_back(*std::move(x));
        }
      } else if (*tag != 0) {
        return absl::InvalidArgumentError("tree code: bad tag");
      }
      auto arity = in.Varint();
      if (!arity.ok()) return arity.status();
      if (*arity > bytes.size()) {
        return absl::InvalidArgumentError("tree code: bad arity");
      }
      if ((h == 0) != (*arity == 0)) {
        return absl::InvalidArgumentError(
            "tree code: arity inconsistent with level");
      }
      Description d;
      std::vector<UnfoldingTree> children;
      bool reaches_previous_level = h == 0;
      for (std::uint64_t j = 0; j < *arity; ++j) {
        auto c = in.Varint();
        if (!c.ok()) return c.status();
        if (*c >= level_start) {
          return absl::InvalidArgumentError(
              "tree code: child does not precede its level");
        }
        if (!d.children.empty() && *c < d.children.back()) {
          return absl::InvalidArgumentError("tree code: unsorted children");
        }
        if (level_of[*c] + 1 == static_cast<int>(h)) {
          reaches_previous_level = true;
        }
        d.children.push_back(static_cast<ClassId>(*c));
        children.push_back(classes[*c]);
      }
      if (!reaches_previous_level) {
        return absl::InvalidArgumentError(
            "tree code: height inconsistent with level");
      }
      labels.push_back(label);
      classes.push_back(UnfoldingTree::Make(std::move(label),
                                            std::move(children)));
      descs.push_back(std::move(d));
      level_of.push_back(static_cast<int>(h));
    }
    // Point descriptions at their owned labels, then check strict order.
    for (std::size_t k = level_start; k < classes.size(); ++k) {
      descs[k].label = labels[k].has_value() ? &*labels[k] : nullptr;
    }
    for (std::size_t k = level_start + 1; k < classes.size(); ++k) {
      if (Compare(descs[k - 1], descs[k]) >= 0) {
        return absl::InvalidArgumentError(
            "tree code: classes not in canonical order");
      }
    }
  }
  if (!in.done()) return absl::InvalidArgumentError("tree code: trailing data");

  // Every class must occur in the root's tree.
  std::vector<bool> reachable(classes.size(), false);
  reachable.back() = true;
  for (std::size_t k = classes.size(); k-- > 0;) {
    if (!reachable[k]) {
      return absl::InvalidArgumentError("tree code: unreachable class");
    }
    for (ClassId c : descs[k].children) reachable[c] = true;
  }
  return classes.back();
}

UnfoldingTree CanonicalForm(const UnfoldingTree& t) {
  const ClassTable table = BuildClassTable(t, ChildSemantics::kMultiset);
  std::unordered_map<const void*, UnfoldingTree> memo;
  return CanonicalFormImpl(t, table, memo);
}

std::string TreeToJson(const UnfoldingTree& t) {
  return TreeJson(CanonicalForm(t)).dump();
}

}  // namespace unfoldwl
