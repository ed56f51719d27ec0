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

#include "unfoldwl/graph.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "unfoldwl/json_util.h"

namespace unfoldwl {
namespace {

template <typename Scalar>
absl::StatusOr<Scalar> ParseEntry(const Json& entry);

template <>
absl::StatusOr<BigInt> ParseEntry<BigInt>(const Json& entry) {
  if (entry.is_number_float()) {
    return absl::InvalidArgumentError(
        absl::StrCat("exact graphs require integer labels, got ",
                     entry.dump()));
  }
  return BigIntFromJson(entry);
}

template <>
absl::StatusOr<double> ParseEntry<double>(const Json& entry) {
  if (!entry.is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("label entry is not a number: ", entry.dump()));
  }
  return entry.get<double>();
}

Json EntryToJson(const BigInt& v) { return BigIntToJson(v); }
Json EntryToJson(double v) { return Json(v); }

template <typename Scalar>
absl::StatusOr<BasicGraph<Scalar>> GraphFromJson(const Json& doc) {
  using Label = typename BasicGraph<Scalar>::Label;
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    return absl::InvalidArgumentError("graph document needs a \"nodes\" array");
  }
  const Json& nodes = doc["nodes"];
  const int n = static_cast<int>(nodes.size());
  std::vector<Label> labels(n);
  std::vector<bool> seen(n, false);
  for (const Json& node : nodes) {
    if (!node.is_object() || !node.contains("id") ||
        !node["id"].is_number_integer() || !node.contains("label") ||
        !node["label"].is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed node entry: ", node.dump()));
    }
    const auto id = node["id"].get<std::int64_t>();
    if (id < 0 || id >= n) {
      return absl::InvalidArgumentError(
          absl::StrCat("node id out of range: ", id));
    }
    if (seen[id]) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate node id ", id));
    }
    seen[id] = true;
    for (const Json& entry : node["label"]) {
      auto value = ParseEntry<Scalar>(entry);
      if (!value.ok()) return value.status();
      labels[id].push_back(*std::move(value));
    }
  }
  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) {
      return absl::InvalidArgumentError("\"edges\" must be an array");
    }
    for (const Json& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        return absl::InvalidArgumentError(
            absl::StrCat("malformed edge: ", e.dump()));
      }
      const auto a = e[0].get<std::int64_t>();
      const auto b = e[1].get<std::int64_t>();
      if (a < 0 || a >= n || b < 0 || b >= n) {
        return absl::InvalidArgumentError(
            absl::StrCat("node id out of range in edge [", a, ",", b, "]"));
      }
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  }
  return BasicGraph<Scalar>::Create(std::move(labels), std::move(edges));
}

template <typename Scalar>
Json GraphToJson(const BasicGraph<Scalar>& g) {
  Json nodes = Json::array();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    Json label = Json::array();
    for (const auto& x : g.label(v)) label.push_back(EntryToJson(x));
    nodes.push_back(Json{{"id", v}, {"label", std::move(label)}});
  }
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back(Json::array({a, b}));
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

template <typename Scalar>
absl::StatusOr<BasicGraph<Scalar>> ParseGraphImpl(std::string_view document) {
  auto doc = ParseJson(document);
  if (!doc.ok()) return doc.status();
  return GraphFromJson<Scalar>(*doc);
}

template <typename Scalar>
absl::StatusOr<std::vector<BasicGraph<Scalar>>> ParseCorpusImpl(
    std::string_view document) {
  auto doc = ParseJson(document);
  if (!doc.ok()) return doc.status();
  std::vector<BasicGraph<Scalar>> graphs;
  if (doc->is_object() && doc->contains("graphs")) {
    if (!(*doc)["graphs"].is_array()) {
      return absl::InvalidArgumentError("\"graphs\" must be an array");
    }
    for (const Json& entry : (*doc)["graphs"]) {
      auto g = GraphFromJson<Scalar>(entry);
      if (!g.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "graph ", graphs.size(), ": ", g.status().message()));
      }
      graphs.push_back(*std::move(g));
    }
    return graphs;
  }
  auto g = GraphFromJson<Scalar>(*doc);
  if (!g.ok()) return g.status();
  graphs.push_back(*std::move(g));
  return graphs;
}

}  // namespace

RealGraph ToRealGraph(const Graph& g) {
  std::vector<RealGraph::Label> labels;
  labels.reserve(g.num_nodes());
  for (const auto& label : g.labels()) {
    RealGraph::Label real;
    for (const BigInt& x : label) real.push_back(x.convert_to<double>());
    labels.push_back(std::move(real));
  }
  return *RealGraph::Create(std::move(labels), g.edges());
}

absl::StatusOr<BigInt> QuantizeValue(double z, const QuantizerConfig& cfg) {
  if (!(cfg.bound > 0) || !(cfg.interval_width > 0)) {
    return absl::InvalidArgumentError(
        "quantizer bound and interval width must be positive");
  }
  if (!(std::abs(z) <= cfg.bound)) {
    return absl::OutOfRangeError(
        absl::StrCat("label entry ", z, " exceeds bound ", cfg.bound));
  }
  const double cells = std::ceil(2.0 * cfg.bound / cfg.interval_width);
  double index = std::floor((z + cfg.bound) / cfg.interval_width);
  if (index >= cells) index = cells - 1;
  return BigInt(static_cast<long long>(index));
}

absl::StatusOr<Graph> QuantizeLabels(const RealGraph& g,
                                     const QuantizerConfig& cfg) {
  std::vector<Graph::Label> labels;
  labels.reserve(g.num_nodes());
  for (const auto& label : g.labels()) {
    Graph::Label codes;
    for (double z : label) {
      auto code = QuantizeValue(z, cfg);
      if (!code.ok()) return code.status();
      codes.push_back(*std::move(code));
    }
    labels.push_back(std::move(codes));
  }
  return Graph::Create(std::move(labels), g.edges());
}

absl::StatusOr<Graph> ParseGraph(std::string_view document) {
  return ParseGraphImpl<BigInt>(document);
}

absl::StatusOr<RealGraph> ParseRealGraph(std::string_view document) {
  return ParseGraphImpl<double>(document);
}

std::string SerializeGraph(const Graph& g) { return GraphToJson(g).dump(); }
std::string SerializeGraph(const RealGraph& g) { return GraphToJson(g).dump(); }

absl::StatusOr<std::vector<Graph>> ParseCorpus(std::string_view document) {
  return ParseCorpusImpl<BigInt>(document);
}

absl::StatusOr<std::vector<RealGraph>> ParseRealCorpus(
    std::string_view document) {
  return ParseCorpusImpl<double>(document);
}

std::string SerializeCorpus(std::span<const Graph> graphs) {
  Json list = Json::array();
  for (const Graph& g : graphs) list.push_back(GraphToJson(g));
  return Json{{"graphs", std::move(list)}}.dump();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out << contents;
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path));
}

}  // namespace unfoldwl
