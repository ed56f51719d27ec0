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

// Command-line front end for the unfoldwl library.
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
// or input errors.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "unfoldwl/bridge.h"
#include "unfoldwl/exact_gnn.h"
#include "unfoldwl/generators.h"
#include "unfoldwl/graph.h"
#include "unfoldwl/json_util.h"
#include "unfoldwl/numeric_gnn.h"
#include "unfoldwl/suite.h"
#include "unfoldwl/unfolding.h"
#include "unfoldwl/wl.h"

namespace unfoldwl {
namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::string input;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 1;
  int depth = -1;
  int max_steps = -1;
  std::string mutant = "none";
};

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--input", c.input, "Input file");
  cmd->add_option("--output", c.output, "Output file (default stdout)");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--depth", c.depth, "Unfolding depth");
  cmd->add_option("--max-steps", c.max_steps, "WL step limit");
  cmd->add_option("--mutant", c.mutant, "Deliberately broken variant")
      ->check(CLI::IsMember({"none", "colliding-hash", "set-children"}));
}

void AddCorpusFlags(CLI::App* cmd, CorpusSpec& spec) {
  cmd->add_option("--generator", spec.generator,
                  "random, cycle-none, cycle-one, cycle-distinct, circulant, "
                  "path");
  cmd->add_option("--nodes", spec.max_nodes, "Node count (maximum for random)");
  cmd->add_option("--min-nodes", spec.min_nodes, "Minimum node count (random)");
  cmd->add_option("--count", spec.count, "Number of graphs");
  cmd->add_option("--edge-prob", spec.edge_prob, "Edge probability (random)");
  cmd->add_option("--degree", spec.degree, "Degree (circulant)");
  cmd->add_option("--alphabet", spec.alphabet, "Label alphabet size (random)");
}

// Thrown out of command bodies to map bad input onto exit status 2.
struct InputError {
  std::string message;
};

template <typename T>
T OrInputError(absl::StatusOr<T> value) {
  if (!value.ok()) throw InputError{value.status().ToString()};
  return *std::move(value);
}

std::string Slurp(const std::string& path, const char* what) {
  if (path.empty()) throw InputError{absl::StrCat("missing ", what)};
  return OrInputError(ReadFile(path));
}

// A bare graph document or a corpus holding exactly one graph.
Graph LoadGraph(const std::string& path) {
  std::vector<Graph> graphs = OrInputError(ParseCorpus(Slurp(path, "--input")));
  if (graphs.size() != 1) {
    throw InputError{absl::StrCat("expected one graph, found ", graphs.size())};
  }
  return std::move(graphs.front());
}

void Emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  if (absl::Status s = WriteFile(c.output, text); !s.ok()) {
    throw InputError{s.ToString()};
  }
}

int RunGen(const Common& c, CorpusSpec spec) {
  spec.seed = c.seed;
  const std::vector<Graph> corpus = OrInputError(GenerateCorpus(spec));
  Emit(c, SerializeCorpus(corpus));
  return kPass;
}

int RunWl(const Common& c) {
  const std::vector<Graph> graphs =
      OrInputError(ParseCorpus(Slurp(c.input, "--input")));
  WlOptions opts = BridgeOptionsFor(OrInputError(ParseMutant(c.mutant))).wl;
  std::optional<int> max_steps;
  if (c.max_steps >= 0) max_steps = c.max_steps;
  const ColoringTrace trace = OrInputError(WlRun(graphs, max_steps, opts));
  if (c.format == "json") {
    Emit(c, trace.ToJson());
    return kPass;
  }
  std::string csv = "step,graph,node,color\n";
  for (int t = 0; t < trace.num_steps(); ++t) {
    for (int g = 0; g < trace.num_graphs(); ++g) {
      const auto colors = trace.colors(t, g);
      for (std::size_t v = 0; v < colors.size(); ++v) {
        absl::StrAppend(&csv, t, ",", g, ",", v, ",", colors[v], "\n");
      }
    }
  }
  Emit(c, csv);
  return kPass;
}

int RunUnfold(const Common& c, int node) {
  const Graph g = LoadGraph(c.input);
  if (c.depth < 0) throw InputError{"--depth is required"};
  const ChildSemantics semantics =
      BridgeOptionsFor(OrInputError(ParseMutant(c.mutant))).children;
  std::vector<NodeId> nodes;
  if (node >= 0) {
    if (!g.contains(node)) throw InputError{"node id out of range"};
    nodes.push_back(node);
  } else {
    for (NodeId v = 0; v < g.num_nodes(); ++v) nodes.push_back(v);
  }
  const std::vector<UnfoldingTree> trees = UnfoldAll(g, c.depth);
  if (c.format == "csv") {
    std::string csv = "node,code,size\n";
    for (NodeId v : nodes) {
      absl::StrAppend(&csv, v, ",",
                      CanonicalCode(trees[v], semantics).ToString(), ",",
                      TreeSize(trees[v]).str(), "\n");
    }
    Emit(c, csv);
    return kPass;
  }
  Json out = Json::array();
  for (NodeId v : nodes) {
    out.push_back(Json{{"node", v},
                       {"code", CanonicalCode(trees[v], semantics).ToString()},
                       {"size", TreeSize(trees[v]).str()},
                       {"tree", *ParseJson(TreeToJson(trees[v]))}});
  }
  Emit(c, out.dump(2));
  return kPass;
}

int RunEquivNodes(const Common& c, int u, int v) {
  const Graph g = LoadGraph(c.input);
  const BridgeOptions bo =
      BridgeOptionsFor(OrInputError(ParseMutant(c.mutant)));
  const int depth = c.depth >= 0 ? c.depth : Diameter(g) + 1;
  const Partition wl = WlPartition(g, bo.wl);
  const Partition unfold = NodeClassesByUnfolding(g, depth, bo.children);
  Json out;
  bool agree = wl == unfold;
  if (u >= 0 || v >= 0) {
    if (!g.contains(u) || !g.contains(v)) {
      throw InputError{"--u and --v must both name nodes of the graph"};
    }
    const std::vector<int> wl_block = wl.BlockOf();
    const std::vector<int> un_block = unfold.BlockOf();
    const bool by_wl = wl_block[u] == wl_block[v];
    const bool by_unfold = un_block[u] == un_block[v];
    agree = by_wl == by_unfold;
    out = Json{{"u", u}, {"v", v}, {"wl", by_wl}, {"unfolding", by_unfold}};
  } else {
    out = Json{{"wl", wl.blocks}, {"unfolding", unfold.blocks}};
  }
  out["depth"] = depth;
  out["agree"] = agree;
  if (c.format == "csv") {
    std::string csv = "node,wl_block,unfolding_block\n";
    const std::vector<int> a = wl.BlockOf();
    const std::vector<int> b = unfold.BlockOf();
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
      absl::StrAppend(&csv, x, ",", a[x], ",", b[x], "\n");
    }
    Emit(c, csv);
  } else {
    Emit(c, out.dump(2));
  }
  return agree ? kPass : kFail;
}

int RunEquivGraphs(const Common& c, const std::string& second) {
  std::vector<Graph> graphs =
      OrInputError(ParseCorpus(Slurp(c.input, "--input")));
  if (!second.empty()) {
    for (Graph& g : OrInputError(ParseCorpus(Slurp(second, "--input2")))) {
      graphs.push_back(std::move(g));
    }
  }
  if (graphs.size() != 2) {
    throw InputError{"equiv-graphs needs exactly two graphs"};
  }
  const GraphVerdicts v = CheckGraphTheorem(
      graphs[0], graphs[1], BridgeOptionsFor(OrInputError(ParseMutant(c.mutant))));
  if (c.format == "csv") {
    Emit(c, absl::StrCat("wl,unfolding,agree\n", v.wl, ",", v.unfolding, ",",
                         v.agree(), "\n"));
  } else {
    Emit(c, Json{{"wl", v.wl}, {"unfolding", v.unfolding}, {"agree", v.agree()}}
                .dump(2));
  }
  return v.agree() ? kPass : kFail;
}

int RunConvergeReport(const Common& c, CorpusSpec spec) {
  std::vector<Graph> corpus;
  if (c.input.empty()) {
    spec.seed = c.seed;
    corpus = OrInputError(GenerateCorpus(spec));
  } else {
    corpus = OrInputError(ParseCorpus(Slurp(c.input, "--input")));
  }
  const BridgeOptions bo =
      BridgeOptionsFor(OrInputError(ParseMutant(c.mutant)));
  std::vector<BridgeReport> reports;
  bool ok = true;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    reports.push_back(BuildBridgeReport(corpus[i], i, bo));
    const BridgeReport& r = reports.back();
    ok = ok && r.all_steps_match() && r.final_match && r.bound_satisfied;
  }
  if (c.format == "csv") {
    Emit(c, BridgeReportsToCsv(reports));
  } else {
    Json rows = Json::array();
    int within_r = 0;
    for (const BridgeReport& r : reports) {
      within_r += r.within_r;
      rows.push_back(Json{{"graph_id", r.graph_id},
                          {"n", r.num_nodes},
                          {"m", r.num_edges},
                          {"diameter", r.diameter},
                          {"wl_steps", r.convergence_step},
                          {"classes_wl", r.classes_wl},
                          {"classes_unfold", r.classes_unfold},
                          {"match", r.final_match && r.all_steps_match()},
                          {"bound_r", r.within_r},
                          {"bound_r1", r.bound_satisfied}});
    }
    Emit(c, Json{{"graphs", std::move(rows)},
                 {"within_r", within_r},
                 {"ok", ok}}
                .dump(2));
  }
  return ok ? kPass : kFail;
}

int RunGnnConstruct(const Common& c) {
  const Dataset ds = OrInputError(ParseDataset(Slurp(c.input, "--input")));
  auto violation = OrInputError(ValidateTarget(ds));
  if (violation.has_value()) {
    std::cerr << "target does not preserve unfolding equivalence: items "
              << violation->item_a << " and " << violation->item_b
              << " (nodes " << violation->node_a << ", " << violation->node_b
              << ") have equal unfolding trees but different targets\n";
    return kFail;
  }
  Emit(c, SerializeProgram(OrInputError(ConstructGnn(ds))));
  return kPass;
}

int RunGnnEval(const Common& c, const std::string& program_path, int node) {
  const ExactGnnProgram program =
      OrInputError(ParseProgram(Slurp(program_path, "--program")));
  const std::vector<Graph> graphs =
      OrInputError(ParseCorpus(Slurp(c.input, "--input")));
  Json out = Json::array();
  std::string csv = "graph,node,output\n";
  for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
    if (node >= 0 && !graphs[gi].contains(node)) {
      throw InputError{"node id out of range"};
    }
    const std::vector<Target> outputs = EvaluateAll(program, graphs[gi]);
    for (NodeId v = 0; v < graphs[gi].num_nodes(); ++v) {
      if (node >= 0 && v != node) continue;
      Json values = Json::array();
      std::string joined;
      for (const Rational& x : outputs[v]) {
        values.push_back(RationalToString(x));
        absl::StrAppend(&joined, joined.empty() ? "" : " ", RationalToString(x));
      }
      out.push_back(Json{{"graph", gi}, {"node", v}, {"output", values}});
      absl::StrAppend(&csv, gi, ",", v, ",", joined, "\n");
    }
  }
  Emit(c, c.format == "csv" ? csv : out.dump(2));
  return kPass;
}

struct NumericFlags {
  int feature_dim = 8;
  int layers = 4;
  int combine_hidden = 8;
  int readout_hidden = 8;
  std::string aggregate = "sum";
  std::string activation = "tanh";
  std::string params;
};

void AddNumericFlags(CLI::App* cmd, NumericFlags& f) {
  cmd->add_option("--dim", f.feature_dim, "Feature dimension m");
  cmd->add_option("--layers", f.layers, "Message-passing layers K");
  cmd->add_option("--combine-hidden", f.combine_hidden, "COMBINE hidden width");
  cmd->add_option("--readout-hidden", f.readout_hidden, "READOUT hidden width");
  cmd->add_option("--aggregate", f.aggregate, "sum or mean")
      ->check(CLI::IsMember({"sum", "mean"}));
  cmd->add_option("--activation", f.activation, "tanh or identity")
      ->check(CLI::IsMember({"tanh", "identity"}));
}

NumericConfig ConfigFrom(const NumericFlags& f, int input_dim, int output_dim) {
  NumericConfig cfg;
  cfg.input_dim = input_dim;
  cfg.feature_dim = f.feature_dim;
  cfg.layers = f.layers;
  cfg.combine_hidden = f.combine_hidden;
  cfg.readout_hidden = f.readout_hidden;
  cfg.output_dim = output_dim;
  cfg.aggregate = f.aggregate == "sum" ? AggregateKind::kSum : AggregateKind::kMean;
  cfg.activation =
      f.activation == "tanh" ? Activation::kTanh : Activation::kIdentity;
  if (absl::Status s = cfg.Validate(); !s.ok()) throw InputError{s.ToString()};
  return cfg;
}

int RunGnnTrain(const Common& c, const NumericFlags& f, TrainHyper hyper,
                const std::string& history_path) {
  const NumericDataset ds =
      OrInputError(ParseNumericDataset(Slurp(c.input, "--input")));
  if (ds.items.empty() || ds.graphs.empty()) throw InputError{"empty dataset"};
  const NumericConfig cfg =
      ConfigFrom(f, ds.graphs.front().label_dim(), ds.items.front().target.size());
  hyper.seed = c.seed;
  const TrainResult result = OrInputError(Train(ds, cfg, hyper));
  if (!history_path.empty()) {
    std::string csv = "step,mse\n";
    for (std::size_t i = 0; i < result.history.size(); ++i) {
      absl::StrAppend(&csv, i, ",", result.history[i], "\n");
    }
    if (absl::Status s = WriteFile(history_path, csv); !s.ok()) {
      throw InputError{s.ToString()};
    }
  }
  Emit(c, SerializeParams(result.params, cfg));
  std::cerr << "final mse " << result.history.back() << " after "
            << result.history.size() - 1 << " steps\n";
  if (result.diverged) {
    std::cerr << "training diverged\n";
    return kFail;
  }
  return kPass;
}

int RunGnnPerturb(const Common& c, const NumericFlags& f, PerturbOptions po) {
  const std::vector<RealGraph> graphs =
      OrInputError(ParseRealCorpus(Slurp(c.input, "--input")));
  NumericConfig cfg;
  NumericParams params;
  if (!f.params.empty()) {
    auto [p, loaded] = OrInputError(ParseParams(Slurp(f.params, "--params")));
    params = std::move(p);
    cfg = loaded;
  } else {
    if (graphs.empty()) throw InputError{"empty corpus"};
    cfg = ConfigFrom(f, graphs.front().label_dim(), 1);
    params = OrInputError(InitParams(cfg, c.seed));
  }
  po.seed = c.seed;
  int violations = 0;
  Json out = Json::array();
  std::string csv;
  for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
    const PerturbReport rep =
        OrInputError(PerturbExperiment(graphs[gi], params, cfg, po));
    violations += rep.violations;
    if (graphs.size() > 1) absl::StrAppend(&csv, "# graph ", gi, "\n");
    absl::StrAppend(&csv, rep.ToCsv());
    out.push_back(Json{{"graph", gi},
                       {"eta", rep.eta},
                       {"N", rep.num_nodes},
                       {"trials", rep.trials},
                       {"B", rep.jacobian_bound.value},
                       {"B_exact", rep.jacobian_bound.exact},
                       {"observed", rep.observed},
                       {"bounds", rep.bounds},
                       {"readout_observed", rep.readout_observed},
                       {"readout_bound", rep.readout_bound},
                       {"violations", rep.violations}});
  }
  Emit(c, c.format == "csv" ? csv : out.dump(2));
  return violations == 0 ? kPass : kFail;
}

int RunSuiteCommand(const Common& c, CorpusSpec spec,
                    const std::string& checks) {
  SuiteOptions options;
  options.checks = OrInputError(ParseCheckList(checks));
  options.mutant = OrInputError(ParseMutant(c.mutant));
  options.seed = c.seed;
  SuiteReport report;
  if (c.input.empty()) {
    spec.seed = c.seed;
    report = OrInputError(RunSuite(spec, options));
  } else {
    report = RunSuite(OrInputError(ParseCorpus(Slurp(c.input, "--input"))),
                      options);
  }
  Emit(c, c.format == "csv" ? report.ToCsv() : report.ToJson());
  for (const CheckResult& r : report.checks) {
    std::cerr << r.name << ": " << r.passed << " passed, " << r.failed
              << " failed\n";
  }
  return report.ok() ? kPass : kFail;
}

int Main(int argc, char** argv) {
  CLI::App app{"Weisfeiler-Lehman refinement, unfolding trees and GNNs"};
  app.require_subcommand(1);
  Common common;

  CorpusSpec gen_spec;
  CLI::App* gen = app.add_subcommand("gen", "Generate a graph corpus");
  AddCommon(gen, common);
  AddCorpusFlags(gen, gen_spec);

  CLI::App* wl = app.add_subcommand("wl", "Run joint 1-WL refinement");
  AddCommon(wl, common);

  int unfold_node = -1;
  CLI::App* unfold = app.add_subcommand("unfold", "Unfolding trees and codes");
  AddCommon(unfold, common);
  unfold->add_option("--node", unfold_node, "Single node (default all)");

  int eq_u = -1;
  int eq_v = -1;
  CLI::App* eq_nodes =
      app.add_subcommand("equiv-nodes", "Compare WL and unfolding partitions");
  AddCommon(eq_nodes, common);
  eq_nodes->add_option("--u", eq_u, "First node");
  eq_nodes->add_option("--v", eq_v, "Second node");

  std::string second;
  CLI::App* eq_graphs =
      app.add_subcommand("equiv-graphs", "Compare two graphs both ways");
  AddCommon(eq_graphs, common);
  eq_graphs->add_option("--input2", second, "Second graph file");

  CorpusSpec conv_spec;
  CLI::App* conv = app.add_subcommand(
      "converge-report", "Per-graph WL/unfolding correspondence and bounds");
  AddCommon(conv, common);
  AddCorpusFlags(conv, conv_spec);

  CLI::App* construct =
      app.add_subcommand("gnn-construct", "Build the exact GNN for a dataset");
  AddCommon(construct, common);

  std::string program_path;
  int eval_node = -1;
  CLI::App* eval = app.add_subcommand("gnn-eval", "Evaluate an exact GNN");
  AddCommon(eval, common);
  eval->add_option("--program", program_path, "Program JSON")->required();
  eval->add_option("--node", eval_node, "Single node (default all)");

  NumericFlags train_flags;
  TrainHyper hyper;
  hyper.lr = 0.03;
  hyper.steps = 10000;
  std::string history_path;
  CLI::App* train = app.add_subcommand("gnn-train", "Train a numeric GNN");
  AddCommon(train, common);
  AddNumericFlags(train, train_flags);
  train->add_option("--lr", hyper.lr, "Learning rate");
  train->add_option("--steps", hyper.steps, "Gradient steps");
  train->add_option("--momentum", hyper.momentum, "Heavy-ball momentum");
  train->add_option("--target-mse", hyper.target_mse, "Early-stop loss");
  train->add_option("--history", history_path, "Loss history CSV file");

  NumericFlags perturb_flags;
  PerturbOptions perturb;
  std::string offsets = "smooth";
  CLI::App* perturb_cmd =
      app.add_subcommand("gnn-perturb", "Perturbation bound experiment");
  AddCommon(perturb_cmd, common);
  AddNumericFlags(perturb_cmd, perturb_flags);
  perturb_cmd->add_option("--params", perturb_flags.params,
                          "Params JSON (default: fresh init from --seed)");
  perturb_cmd->add_option("--eta", perturb.eta, "Offset bound");
  perturb_cmd->add_option("--trials", perturb.trials, "Trials");
  perturb_cmd->add_option("--samples", perturb.jacobian_samples,
                          "Jacobian samples per component");
  perturb_cmd->add_option("--offsets", offsets, "smooth or constant")
      ->check(CLI::IsMember({"smooth", "constant"}));

  CorpusSpec suite_spec;
  std::string checks = "all";
  CLI::App* suite = app.add_subcommand("suite", "Run the property suite");
  AddCommon(suite, common);
  AddCorpusFlags(suite, suite_spec);
  suite->add_option("--checks", checks, "Comma-separated checks or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return RunGen(common, gen_spec);
    if (*wl) return RunWl(common);
    if (*unfold) return RunUnfold(common, unfold_node);
    if (*eq_nodes) return RunEquivNodes(common, eq_u, eq_v);
    if (*eq_graphs) return RunEquivGraphs(common, second);
    if (*conv) return RunConvergeReport(common, conv_spec);
    if (*construct) return RunGnnConstruct(common);
    if (*eval) return RunGnnEval(common, program_path, eval_node);
    if (*train) return RunGnnTrain(common, train_flags, hyper, history_path);
    if (*perturb_cmd) {
      perturb.offsets = offsets == "smooth" ? OffsetKind::kSmooth
                                            : OffsetKind::kConstantPositive;
      return RunGnnPerturb(common, perturb_flags, perturb);
    }
    if (*suite) return RunSuiteCommand(common, suite_spec, checks);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace
}  // namespace unfoldwl

int main(int argc, char** argv) { return unfoldwl::Main(argc, argv); }
