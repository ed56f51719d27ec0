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

#ifndef UNFOLDWL_BRIDGE_H_
#define UNFOLDWL_BRIDGE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unfoldwl/graph.h"
#include "unfoldwl/unfolding_tree.h"
#include "unfoldwl/wl.h"

namespace unfoldwl {

// WL refinement and unfolding trees share no code; each checks the other.
// The options let tests plug in the deliberately broken variants.
struct BridgeOptions {
  WlOptions wl;
  ChildSemantics children = ChildSemantics::kMultiset;
};

// Nodes u, v on which the two sides disagree at step/depth t.
struct Counterexample {
  int t = 0;
  NodeId u = 0;
  NodeId v = 0;
  bool same_wl_color = false;

  friend bool operator==(const Counterexample&,
                         const Counterexample&) = default;
};

struct BridgeReport {
  int graph_id = 0;
  int num_nodes = 0;
  int num_edges = 0;
  // step_match[t]: WL partition at step t == depth-t unfolding partition.
  std::vector<bool> step_match;
  int diameter = 0;
  // converged_at of a solo WL run.
  int convergence_step = 0;
  int classes_wl = 0;      // final WL partition
  int classes_unfold = 0;  // depth r+1 unfolding partition
  bool final_match = false;
  bool within_r = false;
  bool bound_satisfied = false;  // convergence_step <= r + 1
  std::optional<Counterexample> counterexample;

  bool all_steps_match() const { return !counterexample.has_value(); }
};

BridgeReport CheckStepwiseCorrespondence(const Graph& g, int t_max,
                                         const BridgeOptions& options = {});

// Final WL partition == depth-(r+1) unfolding partition.
bool CheckNodeTheorem(const Graph& g, const BridgeOptions& options = {});

struct GraphVerdicts {
  bool wl = false;
  bool unfolding = false;
  bool agree() const { return wl == unfolding; }
};

GraphVerdicts CheckGraphTheorem(const Graph& g1, const Graph& g2,
                                const BridgeOptions& options = {});

struct ConvergenceBound {
  int steps = 0;
  int r = 0;
  bool within_r = false;
  bool within_r_plus_1 = false;
};

ConvergenceBound CheckConvergenceBound(const Graph& g,
                                       const BridgeOptions& options = {});

// Depth r+1 partition equals the partitions at r+2 and r+3.
bool CheckDepthSufficiency(const Graph& g, const BridgeOptions& options = {});

// Full per-graph report: stepwise correspondence for t in 0..n plus the
// final-partition and convergence checks.
BridgeReport BuildBridgeReport(const Graph& g, int graph_id,
                               const BridgeOptions& options = {});

// CSV with header
// graph_id,n,m,diameter,wl_steps,classes_wl,classes_unfold,match,bound_r,bound_r1
std::string BridgeReportsToCsv(std::span<const BridgeReport> reports);

}  // namespace unfoldwl

#endif  // UNFOLDWL_BRIDGE_H_
