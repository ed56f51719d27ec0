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

#include "unfoldwl/partition.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace unfoldwl {

std::vector<int> Partition::BlockOf() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  std::vector<int> of(n, -1);
  for (int i = 0; i < num_blocks(); ++i) {
    for (NodeId v : blocks[i]) of[v] = i;
  }
  return of;
}

std::string Partition::DebugString() const {
  std::vector<std::string> parts;
  for (const auto& b : blocks) {
    parts.push_back(absl::StrCat("{", absl::StrJoin(b, ","), "}"));
  }
  return absl::StrJoin(parts, "");
}

bool Refines(const Partition& finer, const Partition& coarser) {
  const std::vector<int> of = coarser.BlockOf();
  for (const auto& block : finer.blocks) {
    for (NodeId v : block) {
      if (of[v] != of[block.front()]) return false;
    }
  }
  return true;
}

}  // namespace unfoldwl
