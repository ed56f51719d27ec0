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

#include "unfoldwl/bridge.h"

#include <algorithm>
#include <vector>

#include "absl/strings/str_cat.h"
#include "unfoldwl/unfolding.h"

namespace unfoldwl {
namespace {

// First pair on which "same color" and "same tree" disagree.
std::optional<Counterexample> FindDisagreement(std::span<const Color> colors,
                                               std::span<const TreeCode> codes,
                                               int t) {
  const int n = static_cast<int>(colors.size());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool same_color = colors[u] == colors[v];
      const bool same_tree = codes[u] == codes[v];
      if (same_color != same_tree) return Counterexample{t, u, v, same_color};
    }
  }
  return std::nullopt;
}

ColoringTrace SoloRun(const Graph& g, const BridgeOptions& options) {
  return *WlRun(std::span(&g, 1), std::nullopt, options.wl);
}

}  // namespace

BridgeReport CheckStepwiseCorrespondence(const Graph& g, int t_max,
                                         const BridgeOptions& options) {
  BridgeReport report;
  report.num_nodes = g.num_nodes();
  report.num_edges = g.num_edges();
  report.diameter = Diameter(g);
  ColoringTrace trace = *WlInit(std::span(&g, 1), options.wl);
  for (int t = 0; t <= t_max; ++t) {
    if (t > 0) trace = WlStep(std::move(trace));
    const std::vector<TreeCode> codes = UnfoldingCodes(g, t, options.children);
    auto colors = trace.colors(t, 0);
    const bool match = trace.ColorPartition(t, 0) ==
                       PartitionByKey<TreeCode>(codes);
    report.step_match.push_back(match);
    if (!match && !report.counterexample) {
      report.counterexample = FindDisagreement(colors, codes, t);
    }
  }
  return report;
}

bool CheckNodeTheorem(const Graph& g, const BridgeOptions& options) {
  const ColoringTrace trace = SoloRun(g, options);
  return trace.ColorPartition(trace.last_step(), 0) ==
         NodeClassesByUnfolding(g, Diameter(g) + 1, options.children);
}

GraphVerdicts CheckGraphTheorem(const Graph& g1, const Graph& g2,
                                const BridgeOptions& options) {
  GraphVerdicts verdicts;
  verdicts.wl = *WlGraphsEquivalent(g1, g2, options.wl);
  if (options.children == ChildSemantics::kMultiset) {
    verdicts.unfolding = GraphsUnfoldingEquivalent(g1, g2);
  } else {
    const int depth = std::max(Diameter(g1), Diameter(g2)) + 1;
    std::vector<TreeCode> a = UnfoldingCodes(g1, depth, options.children);
    std::vector<TreeCode> b = UnfoldingCodes(g2, depth, options.children);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    verdicts.unfolding = a == b;
  }
  return verdicts;
}

ConvergenceBound CheckConvergenceBound(const Graph& g,
                                       const BridgeOptions& options) {
  const ColoringTrace trace = SoloRun(g, options);
  ConvergenceBound bound;
  bound.steps = trace.converged_at().value_or(trace.last_step() + 1);
  bound.r = Diameter(g);
  bound.within_r = bound.steps <= bound.r;
  bound.within_r_plus_1 = bound.steps <= bound.r + 1;
  return bound;
}

bool CheckDepthSufficiency(const Graph& g, const BridgeOptions& options) {
  const int r = Diameter(g);
  const Partition at_r1 = NodeClassesByUnfolding(g, r + 1, options.children);
  return at_r1 == NodeClassesByUnfolding(g, r + 2, options.children) &&
         at_r1 == NodeClassesByUnfolding(g, r + 3, options.children);
}

BridgeReport BuildBridgeReport(const Graph& g, int graph_id,
                               const BridgeOptions& options) {
  BridgeReport report =
      CheckStepwiseCorrespondence(g, g.num_nodes(), options);
  report.graph_id = graph_id;
  const ColoringTrace trace = SoloRun(g, options);
  const Partition wl = trace.ColorPartition(trace.last_step(), 0);
  const Partition unfold =
      NodeClassesByUnfolding(g, report.diameter + 1, options.children);
  report.classes_wl = wl.num_blocks();
  report.classes_unfold = unfold.num_blocks();
  report.final_match = wl == unfold;
  report.convergence_step = trace.converged_at().value_or(trace.last_step() + 1);
  report.within_r = report.convergence_step <= report.diameter;
  report.bound_satisfied = report.convergence_step <= report.diameter + 1;
  return report;
}

std::string BridgeReportsToCsv(std::span<const BridgeReport> reports) {
  std::vector<const BridgeReport*> sorted;
  for (const BridgeReport& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const BridgeReport* a, const BridgeReport* b) {
                     return a->graph_id < b->graph_id;
                   });
  std::string csv =
      "graph_id,n,m,diameter,wl_steps,classes_wl,classes_unfold,match,bound_r,"
      "bound_r1\n";
  for (const BridgeReport* r : sorted) {
    absl::StrAppend(&csv, r->graph_id, ",", r->num_nodes, ",", r->num_edges,
                    ",", r->diameter, ",", r->convergence_step, ",",
                    r->classes_wl, ",", r->classes_unfold, ",",
                    (r->final_match && r->all_steps_match()) ? 1 : 0, ",",
                    r->within_r ? 1 : 0, ",", r->bound_satisfied ? 1 : 0,
                    "\n");
  }
  return csv;
}

}  // namespace unfoldwl
