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

#include "unfoldwl/suite.h"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "unfoldwl/json_util.h"
#include "unfoldwl/numeric_gnn.h"
#include "unfoldwl/rng.h"
#include "unfoldwl/unfolding.h"

namespace unfoldwl {
namespace {

// FNV-1a over the decimal code, then one SplitMix64 step keyed by the seed.
Rational TargetForCode(const TreeCode& code, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : code.ToString()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  SplitMix64 mix(h ^ seed);
  const std::uint64_t k = mix.Next() % (1ULL << 20);
  return Rational(BigInt(k), BigInt(1024));
}

std::vector<NodeId> RandomPermutation(int n, SplitMix64& rng) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.Below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::string CounterexampleText(const Counterexample& c) {
  return absl::StrCat("t=", c.t, " u=", c.u, " v=", c.v,
                      c.same_wl_color ? " (same WL color, different trees)"
                                      : " (different WL colors, equal trees)");
}

void Record(CheckResult& r, int item, bool ok, std::string detail) {
  if (ok) {
    ++r.passed;
  } else {
    ++r.failed;
    r.failures.push_back(SuiteFailure{item, std::move(detail)});
  }
}

void CheckStepwise(const std::vector<Graph>& corpus, const BridgeOptions& bo,
                   CheckResult& r) {
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const BridgeReport rep =
        CheckStepwiseCorrespondence(corpus[i], corpus[i].num_nodes(), bo);
    Record(r, i, rep.all_steps_match(),
           rep.counterexample ? CounterexampleText(*rep.counterexample) : "");
  }
}

void CheckFinal(const std::vector<Graph>& corpus, const BridgeOptions& bo,
                CheckResult& r) {
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    Record(r, i, CheckNodeTheorem(corpus[i], bo),
           "final WL partition differs from the depth r+1 unfolding partition");
  }
}

void CheckGraphPairs(const std::vector<Graph>& corpus, const SuiteOptions& o,
                     const BridgeOptions& bo, CheckResult& r) {
  if (corpus.empty()) return;
  SplitMix64 rng(o.seed ^ 0x5A5A5A5A5A5A5A5AULL);
  const std::uint64_t n = corpus.size();
  int equivalent = 0;
  for (int k = 0; k < o.random_pairs; ++k) {
    const int a = static_cast<int>(rng.Below(n));
    const int b = static_cast<int>(rng.Below(n));
    const GraphVerdicts v = CheckGraphTheorem(corpus[a], corpus[b], bo);
    if (v.wl && v.unfolding) ++equivalent;
    Record(r, k, v.agree(),
           absl::StrCat("graphs ", a, " and ", b, ": WL says ", v.wl,
                        ", unfolding says ", v.unfolding));
  }
  for (int k = 0; k < o.constructed_pairs; ++k) {
    const int a = static_cast<int>(rng.Below(n));
    const std::vector<NodeId> perm =
        RandomPermutation(corpus[a].num_nodes(), rng);
    const Graph copy = PermuteNodes(corpus[a], perm);
    const GraphVerdicts v = CheckGraphTheorem(corpus[a], copy, bo);
    if (v.wl && v.unfolding) ++equivalent;
    Record(r, o.random_pairs + k, v.wl && v.unfolding,
           absl::StrCat("graph ", a, " and a permuted copy: WL says ", v.wl,
                        ", unfolding says ", v.unfolding));
  }
  r.stats["equivalent_pairs"] = equivalent;
}

void CheckConvergence(const std::vector<Graph>& corpus,
                      const BridgeOptions& bo, CheckResult& r) {
  int within_r = 0;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const ConvergenceBound c = CheckConvergenceBound(corpus[i], bo);
    if (c.within_r) ++within_r;
    Record(r, i, c.within_r_plus_1,
           absl::StrCat("converged at ", c.steps, " > r+1 = ", c.r + 1));
  }
  r.stats["within_r"] = within_r;
  r.stats["within_r_fraction"] =
      corpus.empty() ? 1.0 : static_cast<double>(within_r) / corpus.size();
}

void CheckDepth(const std::vector<Graph>& corpus, const BridgeOptions& bo,
                CheckResult& r) {
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    Record(r, i, CheckDepthSufficiency(corpus[i], bo),
           "partition keeps refining after depth r+1");
  }
}

void CheckExactGnn(const std::vector<Graph>& corpus, CheckResult& r) {
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const Graph& g = corpus[i];
    const int steps = Diameter(g) + 1;
    const auto history = RunExactGnn(g, steps);
    std::string detail;
    for (int k = 0; k <= steps && detail.empty(); ++k) {
      const std::vector<TreeCode> direct = UnfoldingCodes(g, k);
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (history[k][v] != direct[v]) {
          detail = absl::StrCat("step ", k, " node ", v,
                                ": GNN state differs from the unfolding code");
          break;
        }
      }
    }
    Record(r, i, detail.empty(), detail);
  }
}

void CheckConstruct(const std::vector<Graph>& corpus, const SuiteOptions& o,
                    CheckResult& r) {
  if (corpus.empty()) return;
  const int n = static_cast<int>(corpus.size());
  for (int d = 0; d < o.construct_datasets; ++d) {
    std::vector<Graph> graphs;
    for (int j = 0; j < std::min(3, n); ++j) graphs.push_back(corpus[(d + j) % n]);
    const Dataset ds = GenEquivalenceRespectingDataset(std::move(graphs),
                                                       o.seed + d);
    auto program = ConstructGnn(ds);
    if (!program.ok()) {
      Record(r, d, false, std::string(program.status().message()));
      continue;
    }
    std::string detail;
    std::vector<std::vector<Target>> outputs;
    for (const Graph& g : ds.graphs) outputs.push_back(EvaluateAll(*program, g));
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
      const DatasetItem& item = ds.items[i];
      if (outputs[item.graph][item.node] != item.target) {
        detail = absl::StrCat("item ", i, " (graph ", item.graph, ", node ",
                              item.node, ") is not reproduced exactly");
        break;
      }
    }
    Record(r, d, detail.empty(), detail);
  }
}

void CheckNumericEquivariance(const std::vector<Graph>& corpus,
                              const SuiteOptions& o, CheckResult& r) {
  NumericConfig cfg;
  const NumericParams params = *InitParams(cfg, o.seed);
  SplitMix64 rng(o.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const Graph& g = corpus[i];
    const RealGraph rg = ToRealGraph(g);
    const ForwardPass base = *Forward(rg, params, cfg);
    std::string detail;
    const Partition classes = NodeClassesByUnfolding(g, Diameter(g) + 1);
    for (const auto& block : classes.blocks) {
      for (NodeId v : block) {
        if (detail.empty() && base.outputs.col(v) != base.outputs.col(block[0])) {
          detail = absl::StrCat("equivalent nodes ", block[0], " and ", v,
                                " get different outputs");
        }
      }
    }
    const std::vector<NodeId> perm = RandomPermutation(g.num_nodes(), rng);
    const ForwardPass moved = *Forward(PermuteNodes(rg, perm), params, cfg);
    for (NodeId v = 0; v < g.num_nodes() && detail.empty(); ++v) {
      if (moved.outputs.col(perm[v]) != base.outputs.col(v)) {
        detail = absl::StrCat("output of node ", v,
                              " changes under node relabeling");
      }
    }
    Record(r, i, detail.empty(), detail);
  }
}

void CheckPerturbation(const std::vector<Graph>& corpus, const SuiteOptions& o,
                       CheckResult& r) {
  const int count = std::min<int>(o.perturb_graphs, corpus.size());
  int item = 0;
  double worst_ratio = 0;
  for (int i = 0; i < count; ++i) {
    const RealGraph rg = ToRealGraph(corpus[i]);
    for (Activation act : {Activation::kTanh, Activation::kIdentity}) {
      NumericConfig cfg;
      cfg.layers = 3;
      cfg.activation = act;
      const NumericParams params = *InitParams(cfg, o.seed + i);
      for (double eta : {1e-3, 1e-2}) {
        PerturbOptions po;
        po.eta = eta;
        po.trials = o.perturb_trials;
        po.seed = o.seed + 1000 * i;
        const PerturbReport rep = *PerturbExperiment(rg, params, cfg, po);
        for (std::size_t k = 0; k < rep.bounds.size(); ++k) {
          if (rep.bounds[k] > 0) {
            worst_ratio = std::max(worst_ratio, rep.observed[k] / rep.bounds[k]);
          }
        }
        Record(r, item++, rep.violations == 0,
               absl::StrCat("graph ", i, ", ",
                            act == Activation::kTanh ? "tanh" : "identity",
                            ", eta ", eta, ": ", rep.violations,
                            " violations"));
      }
    }
  }
  r.stats["max_observed_over_bound"] = worst_ratio;
}

Json CheckToJson(const CheckResult& c, bool include_timings) {
  Json failures = Json::array();
  for (const SuiteFailure& f : c.failures) {
    failures.push_back(Json{{"item", f.item}, {"detail", f.detail}});
  }
  Json out{{"name", c.name},
           {"passed", c.passed},
           {"failed", c.failed},
           {"stats", c.stats},
           {"failures", std::move(failures)}};
  if (include_timings) out["seconds"] = c.seconds;
  return out;
}

}  // namespace

std::vector<DatasetItem> GenEquivalenceRespectingTargets(const Graph& g,
                                                         std::uint64_t seed) {
  const std::vector<TreeCode> codes = UnfoldingCodes(g, Diameter(g) + 1);
  std::vector<DatasetItem> items;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    items.push_back(DatasetItem{0, v, {TargetForCode(codes[v], seed)}});
  }
  return items;
}

Dataset GenEquivalenceRespectingDataset(std::vector<Graph> graphs,
                                        std::uint64_t seed) {
  Dataset ds;
  ds.graphs = std::move(graphs);
  const int depth = ds.MaxDiameter() + 1;
  for (int gi = 0; gi < static_cast<int>(ds.graphs.size()); ++gi) {
    const std::vector<TreeCode> codes = UnfoldingCodes(ds.graphs[gi], depth);
    for (NodeId v = 0; v < ds.graphs[gi].num_nodes(); ++v) {
      ds.items.push_back(DatasetItem{gi, v, {TargetForCode(codes[v], seed)}});
    }
  }
  return ds;
}

absl::StatusOr<Mutant> ParseMutant(std::string_view name) {
  if (name == "none") return Mutant::kNone;
  if (name == "colliding-hash") return Mutant::kCollidingHash;
  if (name == "set-children") return Mutant::kSetChildren;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mutant \"", std::string(name),
                   "\" (none, colliding-hash, set-children)"));
}

BridgeOptions BridgeOptionsFor(Mutant mutant) {
  BridgeOptions o;
  if (mutant == Mutant::kCollidingHash) o.wl.hash = HashMode::kColliding;
  if (mutant == Mutant::kSetChildren) o.children = ChildSemantics::kSet;
  return o;
}

absl::StatusOr<std::vector<std::string>> ParseCheckList(std::string_view list) {
  std::vector<std::string> checks;
  if (list == "all") {
    for (std::string_view c : kAllChecks) checks.emplace_back(c);
    return checks;
  }
  for (const auto& part : absl::StrSplit(std::string(list), ',')) {
    const std::string name(part);
    if (std::find(std::begin(kAllChecks), std::end(kAllChecks), name) ==
        std::end(kAllChecks)) {
      return absl::InvalidArgumentError(absl::StrCat("unknown check \"", name, "\""));
    }
    if (std::find(checks.begin(), checks.end(), name) == checks.end()) {
      checks.push_back(name);
    }
  }
  return checks;
}

bool SuiteReport::ok() const { return total_failures() == 0; }

int SuiteReport::total_failures() const {
  int total = 0;
  for (const CheckResult& c : checks) total += c.failed;
  return total;
}

const CheckResult* SuiteReport::Find(std::string_view name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string SuiteReport::ToJson(bool include_timings) const {
  Json list = Json::array();
  for (const CheckResult& c : checks) list.push_back(CheckToJson(c, include_timings));
  return Json{{"corpus_size", corpus_size}, {"ok", ok()}, {"checks", std::move(list)}}
      .dump(2);
}

std::string SuiteReport::ToCsv() const {
  std::string csv = "check,passed,failed,seconds\n";
  for (const CheckResult& c : checks) {
    absl::StrAppend(&csv, c.name, ",", c.passed, ",", c.failed, ",", c.seconds,
                    "\n");
  }
  return csv;
}

SuiteReport RunSuite(const std::vector<Graph>& corpus,
                     const SuiteOptions& options) {
  const BridgeOptions bo = BridgeOptionsFor(options.mutant);
  const std::map<std::string, std::function<void(CheckResult&)>> runners = {
      {"stepwise", [&](CheckResult& r) { CheckStepwise(corpus, bo, r); }},
      {"node_theorem", [&](CheckResult& r) { CheckFinal(corpus, bo, r); }},
      {"graph_theorem",
       [&](CheckResult& r) { CheckGraphPairs(corpus, options, bo, r); }},
      {"convergence", [&](CheckResult& r) { CheckConvergence(corpus, bo, r); }},
      {"depth_sufficiency", [&](CheckResult& r) { CheckDepth(corpus, bo, r); }},
      {"exact_gnn", [&](CheckResult& r) { CheckExactGnn(corpus, r); }},
      {"construct",
       [&](CheckResult& r) { CheckConstruct(corpus, options, r); }},
      {"numeric_equivariance",
       [&](CheckResult& r) { CheckNumericEquivariance(corpus, options, r); }},
      {"perturbation",
       [&](CheckResult& r) { CheckPerturbation(corpus, options, r); }},
  };
  SuiteReport report;
  report.corpus_size = static_cast<int>(corpus.size());
  for (const std::string& name : options.checks) {
    auto runner = runners.find(name);
    if (runner == runners.end()) continue;
    CheckResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    runner->second(result);
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    report.checks.push_back(std::move(result));
  }
  return report;
}

absl::StatusOr<SuiteReport> RunSuite(const CorpusSpec& spec,
                                     const SuiteOptions& options) {
  auto corpus = GenerateCorpus(spec);
  if (!corpus.ok()) return corpus.status();
  return RunSuite(*corpus, options);
}

}  // namespace unfoldwl
