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

#include "unfoldwl/exact_gnn.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unfoldwl/json_util.h"
#include "unfoldwl/unfolding.h"

namespace unfoldwl {
namespace {

absl::Status CheckItems(const Dataset& ds) {
  std::size_t dim = 0;
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    const DatasetItem& item = ds.items[i];
    if (item.graph < 0 || item.graph >= static_cast<int>(ds.graphs.size())) {
      return absl::InvalidArgumentError(
          absl::StrCat("item ", i, ": graph index out of range"));
    }
    if (!ds.graphs[item.graph].contains(item.node)) {
      return absl::InvalidArgumentError(
          absl::StrCat("item ", i, ": node id out of range"));
    }
    if (i == 0) dim = item.target.size();
    if (item.target.size() != dim || dim == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("item ", i, ": inconsistent target dimension"));
    }
  }
  return absl::OkStatus();
}

// Depth-(r+1) code of every item's node.
std::vector<TreeCode> ItemCodes(const Dataset& ds, int depth) {
  std::vector<std::vector<TreeCode>> per_graph(ds.graphs.size());
  std::vector<TreeCode> codes;
  codes.reserve(ds.items.size());
  for (const DatasetItem& item : ds.items) {
    auto& graph_codes = per_graph[item.graph];
    if (graph_codes.empty()) {
      graph_codes = UnfoldingCodes(ds.graphs[item.graph], depth);
    }
    codes.push_back(graph_codes[item.node]);
  }
  return codes;
}

Json TargetToJson(const Target& t) {
  Json out = Json::array();
  for (const Rational& x : t) out.push_back(RationalToString(x));
  return out;
}

absl::StatusOr<Target> TargetFromJson(const Json& j) {
  if (!j.is_array()) return absl::InvalidArgumentError("target must be array");
  Target t;
  for (const Json& x : j) {
    absl::StatusOr<Rational> value = absl::InvalidArgumentError(
        absl::StrCat("bad target entry ", x.dump()));
    if (x.is_string()) {
      value = ParseRational(x.get_ref<const std::string&>());
    } else if (x.is_number_integer()) {
      auto b = BigIntFromJson(x);
      if (b.ok()) value = Rational(*b);
    }
    if (!value.ok()) return value.status();
    t.push_back(*std::move(value));
  }
  return t;
}

}  // namespace

absl::StatusOr<TreeCode> AggregateExact(std::span<const TreeCode> codes) {
  std::vector<UnfoldingTree> children;
  children.reserve(codes.size());
  for (const TreeCode& c : codes) {
    auto t = DecodeTree(c);
    if (!t.ok()) return t.status();
    children.push_back(*std::move(t));
  }
  return EncodeTree(UnfoldingTree::Make(std::nullopt, std::move(children)));
}

absl::StatusOr<TreeCode> CombineExact(const TreeCode& prev,
                                      const TreeCode& agg) {
  auto own = DecodeTree(prev);
  if (!own.ok()) return own.status();
  auto union_tree = DecodeTree(agg);
  if (!union_tree.ok()) return union_tree.status();
  if (!union_tree->is_void()) {
    return absl::InvalidArgumentError(
        "combine: aggregated tree must have a VOID root");
  }
  return EncodeTree(union_tree->WithRootLabel(own->maybe_label()));
}

std::vector<std::vector<TreeCode>> RunExactGnn(const Graph& g, int steps) {
  std::vector<std::vector<TreeCode>> history;
  std::vector<TreeCode> h;
  h.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    h.push_back(EncodeTree(UnfoldingTree::Leaf(g.label(v))));
  }
  history.push_back(h);
  for (int k = 1; k <= steps; ++k) {
    std::vector<TreeCode> next;
    next.reserve(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      std::vector<TreeCode> incoming;
      for (NodeId u : g.neighbors(v)) incoming.push_back(h[u]);
      // States are codes produced above, so decoding cannot fail.
      const TreeCode agg = *AggregateExact(incoming);
      next.push_back(*CombineExact(h[v], agg));
    }
    h = std::move(next);
    history.push_back(h);
  }
  return history;
}

int Dataset::MaxDiameter() const {
  int r = 0;
  for (const Graph& g : graphs) r = std::max(r, Diameter(g));
  return r;
}

absl::StatusOr<std::optional<TargetViolation>> ValidateTarget(
    const Dataset& ds) {
  if (absl::Status s = CheckItems(ds); !s.ok()) return s;
  const std::vector<TreeCode> codes = ItemCodes(ds, ds.MaxDiameter() + 1);
  std::map<TreeCode, int> first_item;
  for (int i = 0; i < static_cast<int>(ds.items.size()); ++i) {
    auto [it, inserted] = first_item.emplace(codes[i], i);
    if (!inserted && ds.items[it->second].target != ds.items[i].target) {
      return TargetViolation{it->second, i, ds.items[it->second].node,
                             ds.items[i].node};
    }
  }
  return std::optional<TargetViolation>();
}

absl::StatusOr<ExactGnnProgram> ConstructGnn(const Dataset& ds) {
  if (ds.items.empty()) return absl::InvalidArgumentError("empty dataset");
  auto violation = ValidateTarget(ds);
  if (!violation.ok()) return violation.status();
  if (violation->has_value()) {
    const TargetViolation& v = **violation;
    return absl::FailedPreconditionError(absl::StrCat(
        "target does not preserve unfolding equivalence: items ", v.item_a,
        " (node ", v.node_a, ") and ", v.item_b, " (node ", v.node_b, ")"));
  }
  ExactGnnProgram p;
  p.steps = ds.MaxDiameter() + 1;
  const std::vector<TreeCode> codes = ItemCodes(ds, p.steps);
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    p.readout.emplace(codes[i], ds.items[i].target);
  }
  p.default_output.assign(ds.items.front().target.size(), Rational(0));
  return p;
}

std::vector<Target> EvaluateAll(const ExactGnnProgram& p, const Graph& g) {
  const std::vector<TreeCode> final_states = RunExactGnn(g, p.steps).back();
  std::vector<Target> out;
  out.reserve(final_states.size());
  for (const TreeCode& c : final_states) {
    auto it = p.readout.find(c);
    out.push_back(it == p.readout.end() ? p.default_output : it->second);
  }
  return out;
}

absl::StatusOr<Target> Evaluate(const ExactGnnProgram& p, const Graph& g,
                                NodeId v) {
  if (!g.contains(v)) {
    return absl::OutOfRangeError(absl::StrCat("node id out of range: ", v));
  }
  return EvaluateAll(p, g)[v];
}

std::string SerializeProgram(const ExactGnnProgram& p) {
  Json readout = Json::array();
  for (const auto& [code, out] : p.readout) {
    readout.push_back(Json{{"code", code.ToString()}, {"out", TargetToJson(out)}});
  }
  return Json{{"steps", p.steps},
              {"readout", std::move(readout)},
              {"default", TargetToJson(p.default_output)}}
      .dump();
}

absl::StatusOr<ExactGnnProgram> ParseProgram(std::string_view document) {
  auto doc = ParseJson(document);
  if (!doc.ok()) return doc.status();
  if (!doc->is_object() || !doc->contains("steps") ||
      !(*doc)["steps"].is_number_integer() || !doc->contains("readout") ||
      !(*doc)["readout"].is_array() || !doc->contains("default")) {
    return absl::InvalidArgumentError(
        "program needs \"steps\", \"readout\" and \"default\"");
  }
  ExactGnnProgram p;
  p.steps = (*doc)["steps"].get<int>();
  if (p.steps < 0) return absl::InvalidArgumentError("negative step count");
  auto def = TargetFromJson((*doc)["default"]);
  if (!def.ok()) return def.status();
  p.default_output = *std::move(def);
  for (const Json& entry : (*doc)["readout"]) {
    if (!entry.is_object() || !entry.contains("code") ||
        !entry["code"].is_string() || !entry.contains("out")) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed readout entry ", entry.dump()));
    }
    auto code = TreeCode::FromString(entry["code"].get<std::string>());
    if (!code.ok()) return code.status();
    auto out = TargetFromJson(entry["out"]);
    if (!out.ok()) return out.status();
    if (out->size() != p.default_output.size()) {
      return absl::InvalidArgumentError("readout dimension mismatch");
    }
    if (!p.readout.emplace(*std::move(code), *std::move(out)).second) {
      return absl::InvalidArgumentError("duplicate readout code");
    }
  }
  return p;
}

std::string SerializeDataset(const Dataset& ds) {
  Json graphs = ParseJson(SerializeCorpus(ds.graphs))->at("graphs");
  Json items = Json::array();
  for (const DatasetItem& item : ds.items) {
    items.push_back(Json{{"graph", item.graph},
                         {"node", item.node},
                         {"target", TargetToJson(item.target)}});
  }
  return Json{{"graphs", std::move(graphs)}, {"items", std::move(items)}}
      .dump();
}

absl::StatusOr<Dataset> ParseDataset(std::string_view document) {
  auto doc = ParseJson(document);
  if (!doc.ok()) return doc.status();
  if (!doc->is_object() || !doc->contains("items") ||
      !(*doc)["items"].is_array()) {
    return absl::InvalidArgumentError("dataset needs an \"items\" array");
  }
  auto graphs = ParseCorpus(document);
  if (!graphs.ok()) return graphs.status();
  Dataset ds;
  ds.graphs = *std::move(graphs);
  for (const Json& entry : (*doc)["items"]) {
    if (!entry.is_object() || !entry.contains("graph") ||
        !entry["graph"].is_number_integer() || !entry.contains("node") ||
        !entry["node"].is_number_integer() || !entry.contains("target")) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed dataset item ", entry.dump()));
    }
    auto target = TargetFromJson(entry["target"]);
    if (!target.ok()) return target.status();
    ds.items.push_back(DatasetItem{entry["graph"].get<int>(),
                                   entry["node"].get<int>(),
                                   *std::move(target)});
  }
  if (absl::Status s = CheckItems(ds); !s.ok()) return s;
  return ds;
}

}  // namespace unfoldwl
