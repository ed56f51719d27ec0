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

#ifndef UNFOLDWL_PARTITION_H_
#define UNFOLDWL_PARTITION_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "unfoldwl/graph.h"

namespace unfoldwl {

// Partition of 0..n-1 into disjoint blocks. Blocks are ascending and ordered
// by their smallest member, so equal partitions compare equal.
struct Partition {
  std::vector<std::vector<NodeId>> blocks;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  // Block index per node.
  std::vector<int> BlockOf() const;
  std::string DebugString() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Groups nodes by equal key.
template <typename Key>
Partition PartitionByKey(std::span<const Key> keys) {
  std::map<Key, int> index;
  Partition p;
  for (NodeId v = 0; v < static_cast<NodeId>(keys.size()); ++v) {
    auto [it, inserted] = index.emplace(keys[v], p.num_blocks());
    if (inserted) p.blocks.emplace_back();
    p.blocks[it->second].push_back(v);
  }
  return p;
}

// True iff every block of `finer` lies inside a block of `coarser`.
bool Refines(const Partition& finer, const Partition& coarser);

}  // namespace unfoldwl

#endif  // UNFOLDWL_PARTITION_H_
