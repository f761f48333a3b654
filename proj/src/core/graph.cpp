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

#include "core/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "core/error.hpp"

namespace qsearch {

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::string family,
             Json params, std::optional<std::uint64_t> seed, bool weighted,
             Json metadata)
    : n_(n),
      edges_(std::move(edges)),
      family_(std::move(family)),
      params_(std::move(params)),
      seed_(seed),
      weighted_(weighted),
      metadata_(std::move(metadata)) {
  if (n_ == 0) throw InvalidArgument("graph must have at least one node");
  if (n_ > UINT32_MAX) throw InvalidArgument("graph too large");
  for (Edge& e : edges_) {
    if (e.u == e.v) {
      throw InvalidArgument("self-loop at node " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= n_) {
      throw InvalidArgument("edge endpoint " + std::to_string(e.v) +
                            " out of range for n=" + std::to_string(n_));
    }
    if (weighted_) {
      if (!(e.w > 0.0 && e.w <= 1.0)) {
        throw InvalidArgument("edge weight outside (0, 1]");
      }
    } else if (e.w != 1.0) {
      throw InvalidArgument("unweighted graph with weight != 1");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v) {
      throw InvalidArgument("duplicate edge (" + std::to_string(edges_[k].u) +
                            ", " + std::to_string(edges_[k].v) + ")");
    }
  }

  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adj_.resize(2 * edges_.size());
  adj_w_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Sorted edges give ascending neighbor lists: lower neighbors arrive via
  // the v-side before any higher neighbor is appended from the u-side.
  for (const Edge& e : edges_) {
    adj_[fill[e.v]] = e.u;
    adj_w_[fill[e.v]++] = e.w;
  }
  for (const Edge& e : edges_) {
    adj_[fill[e.u]] = e.v;
    adj_w_[fill[e.u]++] = e.w;
  }
}

double Graph::weighted_degree(std::size_t i) const {
  double d = 0.0;
  for (double w : neighbor_weights(i)) d += w;
  return d;
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(),
                            static_cast<std::uint32_t>(j));
}

bool Graph::is_connected() const {
  std::size_t count = 0;
  component_labels(*this, &count);
  return count == 1;
}

Json Graph::to_json() const {
  Json doc;
  doc["n"] = n_;
  doc["family"] = family_;
  doc["params"] = params_;
  if (seed_) doc["seed"] = *seed_;
  doc["weighted"] = weighted_;
  if (!metadata_.empty()) doc["metadata"] = metadata_;
  Json edges = Json::array();
  for (const Edge& e : edges_) edges.push_back(Json::array({e.u, e.v, e.w}));
  doc["edges"] = std::move(edges);
  return doc;
}

Graph Graph::from_json(const Json& doc) {
  try {
    std::size_t n = doc.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    bool any_non_unit = false;
    for (const Json& e : doc.at("edges")) {
      Edge edge{e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(),
                e.size() > 2 ? e.at(2).get<double>() : 1.0};
      any_non_unit = any_non_unit || edge.w != 1.0;
      edges.push_back(edge);
    }
    std::optional<std::uint64_t> seed;
    if (doc.contains("seed") && !doc["seed"].is_null()) {
      seed = doc["seed"].get<std::uint64_t>();
    }
    bool weighted = doc.value("weighted", any_non_unit);
    return Graph(n, std::move(edges), doc.value("family", "custom"),
                 doc.value("params", Json::object()), seed, weighted,
                 doc.value("metadata", Json::object()));
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("malformed graph document: ") + ex.what());
  }
}

Graph Graph::with_metadata(Json metadata) const {
  Graph copy = *this;
  copy.metadata_ = std::move(metadata);
  return copy;
}

std::vector<std::uint32_t> component_labels(const Graph& g,
                                            std::size_t* count) {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> label(g.n(), kUnset);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < g.n(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t u : g.neighbors(v)) {
        if (label[u] == kUnset) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

Graph induced_subgraph(const Graph& g, std::vector<std::uint32_t> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<std::uint32_t> index(g.n(), UINT32_MAX);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    index[nodes[k]] = static_cast<std::uint32_t>(k);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (index[e.u] != UINT32_MAX && index[e.v] != UINT32_MAX) {
      edges.push_back({index[e.u], index[e.v], e.w});
    }
  }
  return Graph(nodes.size(), std::move(edges), g.family(), g.params(),
               g.seed(), g.weighted(), g.metadata());
}

Graph relabel(const Graph& g, const std::vector<std::uint32_t>& perm) {
  if (perm.size() != g.n()) throw InvalidArgument("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.w});
  return Graph(g.n(), std::move(edges), g.family(), g.params(), g.seed(),
               g.weighted(), g.metadata());
}

}  // namespace qsearch
