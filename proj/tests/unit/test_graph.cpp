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

#include "core/error.hpp"
#include "core/graph.hpp"
#include "doctest.h"

using qsearch::Edge;
using qsearch::Graph;

TEST_CASE("edges are canonicalized and sorted") {
  Graph g(4, {{3, 1, 1.0}, {0, 2, 1.0}, {2, 1, 1.0}});
  REQUIRE(g.edge_count() == 3);
  CHECK(g.edges()[0] == Edge{0, 2, 1.0});
  CHECK(g.edges()[1] == Edge{1, 2, 1.0});
  CHECK(g.edges()[2] == Edge{1, 3, 1.0});
  CHECK(g.degree(1) == 2);
  CHECK(g.has_edge(3, 1));
  CHECK_FALSE(g.has_edge(0, 3));
  auto nb = g.neighbors(1);
  CHECK(std::vector<std::uint32_t>(nb.begin(), nb.end()) == std::vector<std::uint32_t>{2, 3});
}

TEST_CASE("invalid edge lists are rejected") {
  CHECK_THROWS_AS(Graph(3, {{1, 1, 1.0}}), qsearch::InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {1, 0, 1.0}}), qsearch::InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{0, 3, 1.0}}), qsearch::InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{0, 1, 0.5}}), qsearch::InvalidArgument);  // unweighted
  CHECK_THROWS_AS(Graph(3, {{0, 1, 1.5}}, "custom", qsearch::Json::object(), {}, true),
                  qsearch::InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{0, 1, 0.0}}, "custom", qsearch::Json::object(), {}, true),
                  qsearch::InvalidArgument);
}

TEST_CASE("json round trip is exact") {
  Graph g(5, {{0, 1, 0.25}, {1, 2, 1.0}, {3, 4, 0.1}}, "custom",
          qsearch::Json{{"a", 1}}, 99, true);
  const auto doc = g.to_json();
  const Graph h = Graph::from_json(doc);
  CHECK(h.n() == 5);
  CHECK(h.edges() == g.edges());
  CHECK(h.seed().value() == 99);
  CHECK(h.weighted());
  CHECK(h.to_json().dump() == doc.dump());
}

TEST_CASE("connectivity and components") {
  Graph g(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
  CHECK_FALSE(g.is_connected());
  std::size_t count = 0;
  const auto labels = qsearch::component_labels(g, &count);
  CHECK(count == 2);
  CHECK(labels[0] == labels[2]);
  CHECK(labels[0] != labels[3]);
  const Graph sub = qsearch::induced_subgraph(g, {0, 1, 2});
  CHECK(sub.n() == 3);
  CHECK(sub.edge_count() == 2);
  CHECK(sub.is_connected());
}

TEST_CASE("relabel preserves structure") {
  Graph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const Graph h = qsearch::relabel(g, {2, 0, 1});  // old i -> new perm[i]
  CHECK(h.edge_count() == 2);
  CHECK(h.degree(0) == 2);  // old node 1
}
