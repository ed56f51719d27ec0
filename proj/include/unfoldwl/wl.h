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

#ifndef UNFOLDWL_WL_H_
#define UNFOLDWL_WL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "unfoldwl/graph.h"
#include "unfoldwl/partition.h"

namespace unfoldwl {

using Color = std::uint64_t;

enum class HashMode {
  kInjective,
  // Keys are reduced to a 2-bit digest before lookup, so distinct keys
  // collide. Mutation-testing only.
  kColliding,
};

enum class Termination {
  // Stop once the joint color count and every graph's own color count are
  // unchanged between consecutive steps.
  kPerGraphCount,
  // Stop once the joint color count is unchanged.
  kUnionCount,
};

struct WlOptions {
  HashMode hash = HashMode::kInjective;
  Termination termination = Termination::kPerGraphCount;
};

// History of a joint 1-WL color refinement over one or more graphs.
//
// Step 0 colors come from an injective label dictionary shared by all
// graphs. Step t colors come from an injective dictionary over
// (own color at t-1, sorted neighbor colors at t-1); every step hands out
// colors that were never used before.
class ColoringTrace {
 public:
  int num_graphs() const { return static_cast<int>(offsets_.size()) - 1; }
  int num_nodes(int graph) const {
    return offsets_[graph + 1] - offsets_[graph];
  }
  int total_nodes() const { return offsets_.back(); }
  // Recorded steps including step 0.
  int num_steps() const { return static_cast<int>(steps_.size()); }
  int last_step() const { return num_steps() - 1; }

  std::span<const Color> colors(int step) const { return steps_[step]; }
  std::span<const Color> colors(int step, int graph) const {
    return std::span(steps_[step])
        .subspan(offsets_[graph], num_nodes(graph));
  }

  int DistinctColors(int step) const;
  int DistinctColors(int step, int graph) const;
  Partition ColorPartition(int step, int graph) const;
  // Color -> number of nodes of `graph` carrying it.
  std::map<Color, int> Histogram(int step, int graph) const;

  // Smallest t >= 1 at which refinement stopped, if it did.
  std::optional<int> converged_at() const { return converged_at_; }
  const WlOptions& options() const { return options_; }

  // Number of entries in the refinement dictionary.
  std::size_t dictionary_size() const { return refine_dictionary_.size(); }

  // {"steps":[{"step":t,"graph":g,"colors":[...]},...],"converged_at":t}
  std::string ToJson() const;

 private:
  friend absl::StatusOr<ColoringTrace> WlInit(std::span<const Graph>,
                                              WlOptions);
  friend ColoringTrace WlStep(ColoringTrace);
  friend absl::StatusOr<ColoringTrace> WlRun(std::span<const Graph>,
                                             std::optional<int>, WlOptions);

  ColoringTrace() = default;
  bool CountStable() const;
  Color Fresh() { return next_color_++; }

  WlOptions options_;
  std::vector<int> offsets_;
  std::vector<std::vector<int>> neighbors_;  // joint node ids
  std::vector<std::vector<Color>> steps_;
  std::map<Graph::Label, Color> label_dictionary_;
  std::map<std::pair<Color, std::vector<Color>>, Color> refine_dictionary_;
  std::map<std::pair<int, Color>, Color> colliding_dictionary_;
  Color next_color_ = 0;
  std::optional<int> converged_at_;
};

// Step-0 coloring of all graphs jointly. Fails on an empty list or mixed
// label dimensions.
absl::StatusOr<ColoringTrace> WlInit(std::span<const Graph> graphs,
                                     WlOptions options = {});

// Appends one refinement step.
ColoringTrace WlStep(ColoringTrace trace);

// Refines until the stopping rule fires or `max_steps` steps have been taken
// (default: the total node count, which always suffices).
absl::StatusOr<ColoringTrace> WlRun(std::span<const Graph> graphs,
                                    std::optional<int> max_steps = std::nullopt,
                                    WlOptions options = {});

// Final WL partition of a single graph.
Partition WlPartition(const Graph& g, WlOptions options = {});

absl::StatusOr<bool> WlNodeEquivalent(const Graph& g, NodeId u, NodeId v,
                                      WlOptions options = {});

// Joint run; equal color histograms at the final step.
absl::StatusOr<bool> WlGraphsEquivalent(const Graph& g1, const Graph& g2,
                                        WlOptions options = {});

}  // namespace unfoldwl

#endif  // UNFOLDWL_WL_H_
