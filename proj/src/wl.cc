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

#include "unfoldwl/wl.h"

#include <algorithm>
#include <cassert>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unfoldwl/json_util.h"

namespace unfoldwl {

int ColoringTrace::DistinctColors(int step) const {
  std::set<Color> seen(steps_[step].begin(), steps_[step].end());
  return static_cast<int>(seen.size());
}

int ColoringTrace::DistinctColors(int step, int graph) const {
  auto c = colors(step, graph);
  std::set<Color> seen(c.begin(), c.end());
  return static_cast<int>(seen.size());
}

Partition ColoringTrace::ColorPartition(int step, int graph) const {
  return PartitionByKey<Color>(colors(step, graph));
}

std::map<Color, int> ColoringTrace::Histogram(int step, int graph) const {
  std::map<Color, int> hist;
  for (Color c : colors(step, graph)) ++hist[c];
  return hist;
}

std::string ColoringTrace::ToJson() const {
  Json steps = Json::array();
  for (int t = 0; t < num_steps(); ++t) {
    for (int g = 0; g < num_graphs(); ++g) {
      auto c = colors(t, g);
      steps.push_back(Json{{"step", t},
                           {"graph", g},
                           {"colors", std::vector<Color>(c.begin(), c.end())}});
    }
  }
  Json doc{{"steps", std::move(steps)}};
  doc["converged_at"] =
      converged_at_.has_value() ? Json(*converged_at_) : Json(nullptr);
  return doc.dump();
}

bool ColoringTrace::CountStable() const {
  const int t = last_step();
  if (t < 1) return false;
  if (DistinctColors(t) != DistinctColors(t - 1)) return false;
  if (options_.termination == Termination::kPerGraphCount) {
    for (int g = 0; g < num_graphs(); ++g) {
      if (DistinctColors(t, g) != DistinctColors(t - 1, g)) return false;
    }
  }
  return true;
}

absl::StatusOr<ColoringTrace> WlInit(std::span<const Graph> graphs,
                                     WlOptions options) {
  if (graphs.empty()) return absl::InvalidArgumentError("no graphs given");
  const int dim = graphs.front().label_dim();
  ColoringTrace trace;
  trace.options_ = options;
  trace.offsets_.push_back(0);
  std::vector<Color> initial;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    if (g.label_dim() != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("mixed label dimensions: graph ", gi, " has ",
                       g.label_dim(), ", expected ", dim));
    }
    const int base = trace.offsets_.back();
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      auto [it, inserted] = trace.label_dictionary_.emplace(g.label(v), 0);
      if (inserted) it->second = trace.Fresh();
      initial.push_back(it->second);
      std::vector<int> nbrs;
      for (NodeId u : g.neighbors(v)) nbrs.push_back(base + u);
      trace.neighbors_.push_back(std::move(nbrs));
    }
    trace.offsets_.push_back(base + g.num_nodes());
  }
  trace.steps_.push_back(std::move(initial));
  return trace;
}

ColoringTrace WlStep(ColoringTrace trace) {
  const std::vector<Color>& prev = trace.steps_.back();
  const int step = trace.num_steps();
  const Color first_fresh = trace.next_color_;
  std::vector<Color> next(prev.size());
  for (std::size_t v = 0; v < prev.size(); ++v) {
    std::vector<Color> around;
    around.reserve(trace.neighbors_[v].size());
    for (int u : trace.neighbors_[v]) around.push_back(prev[u]);
    std::sort(around.begin(), around.end());
    if (trace.options_.hash == HashMode::kColliding) {
      Color digest = prev[v] * 7;
      for (Color c : around) digest += c;
      auto [it, inserted] =
          trace.colliding_dictionary_.emplace(std::pair(step, digest % 4), 0);
      if (inserted) it->second = trace.Fresh();
      next[v] = it->second;
      continue;
    }
    auto [it, inserted] = trace.refine_dictionary_.emplace(
        std::pair(prev[v], std::move(around)), 0);
    if (inserted) it->second = trace.Fresh();
    next[v] = it->second;
    // Keys carry step t-1 colors, which are unique to that step, so every
    // color handed out here is fresh.
    assert(next[v] >= first_fresh);
  }
  (void)first_fresh;
  trace.steps_.push_back(std::move(next));
  return trace;
}

absl::StatusOr<ColoringTrace> WlRun(std::span<const Graph> graphs,
                                    std::optional<int> max_steps,
                                    WlOptions options) {
  auto trace = WlInit(graphs, options);
  if (!trace.ok()) return trace.status();
  const int limit = max_steps.value_or(trace->total_nodes());
  while (trace->last_step() < limit) {
    *trace = WlStep(*std::move(trace));
    if (trace->CountStable()) {
      trace->converged_at_ = trace->last_step();
      break;
    }
  }
  return trace;
}

Partition WlPartition(const Graph& g, WlOptions options) {
  const ColoringTrace trace = *WlRun(std::span(&g, 1), std::nullopt, options);
  return trace.ColorPartition(trace.last_step(), 0);
}

absl::StatusOr<bool> WlNodeEquivalent(const Graph& g, NodeId u, NodeId v,
                                      WlOptions options) {
  if (!g.contains(u) || !g.contains(v)) {
    return absl::OutOfRangeError(
        absl::StrCat("node id out of range: ", g.contains(u) ? v : u));
  }
  auto trace = WlRun(std::span(&g, 1), std::nullopt, options);
  if (!trace.ok()) return trace.status();
  auto colors = trace->colors(trace->last_step(), 0);
  return colors[u] == colors[v];
}

absl::StatusOr<bool> WlGraphsEquivalent(const Graph& g1, const Graph& g2,
                                        WlOptions options) {
  const std::vector<Graph> pair = {g1, g2};
  auto trace = WlRun(pair, std::nullopt, options);
  if (!trace.ok()) return trace.status();
  const int t = trace->last_step();
  return trace->Histogram(t, 0) == trace->Histogram(t, 1);
}

}  // namespace unfoldwl
