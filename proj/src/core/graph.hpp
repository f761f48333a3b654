// Copyright 2026 The qsearch Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsearch {

using Json = nlohmann::json;

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected simple graph, immutable after construction. Edges are stored
// canonically (u < v, sorted lexicographically) next to a CSR adjacency.
class Graph {
 public:
  Graph() = default;

  // Throws InvalidArgument on self-loops, duplicates, out-of-range endpoints,
  // or weights outside (0, 1] (exactly 1 when unweighted).
  Graph(std::size_t n, std::vector<Edge> edges, std::string family = "custom",
        Json params = Json::object(), std::optional<std::uint64_t> seed = {},
        bool weighted = false, Json metadata = Json::object());

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& family() const { return family_; }
  const Json& params() const { return params_; }
  const std::optional<std::uint64_t>& seed() const { return seed_; }
  bool weighted() const { return weighted_; }
  const Json& metadata() const { return metadata_; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  std::span<const double> neighbor_weights(std::size_t i) const {
    return {adj_w_.data() + offsets_[i], adj_w_.data() + offsets_[i + 1]};
  }
  std::size_t degree(std::size_t i) const {
    return offsets_[i + 1] - offsets_[i];
  }
  double weighted_degree(std::size_t i) const;
  bool has_edge(std::size_t i, std::size_t j) const;

  bool is_connected() const;

  Json to_json() const;
  static Graph from_json(const Json& doc);

  Graph with_metadata(Json metadata) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::string family_;
  Json params_ = Json::object();
  std::optional<std::uint64_t> seed_;
  bool weighted_ = false;
  Json metadata_ = Json::object();
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> adj_;
  std::vector<double> adj_w_;
};

// Component label per node; labels are numbered in order of smallest member.
std::vector<std::uint32_t> component_labels(const Graph& g,
                                            std::size_t* count = nullptr);

// Subgraph on `nodes` (any order), re-indexed by ascending original index.
Graph induced_subgraph(const Graph& g, std::vector<std::uint32_t> nodes);

// Node i of g becomes node perm[i].
Graph relabel(const Graph& g, const std::vector<std::uint32_t>& perm);

}  // namespace qsearch
