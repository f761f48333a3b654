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

#include <functional>
#include <limits>

#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/netgen.hpp"
#include "doctest.h"

using namespace qsearch;

namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return Graph(n, e);
}

Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::uint32_t i = 1; i <= leaves; ++i) e.push_back({0, i, 1.0});
  return Graph(leaves + 1, e);
}

// Floyd-Warshall mean over ordered pairs.
double oracle_path_length(const Graph& g) {
  const std::size_t n = g.n();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (const auto& e : g.edges()) d[e.u * n + e.v] = d[e.v * n + e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += d[i * n + j];
  return s / static_cast<double>(n * (n - 1));
}

// Triangle count by brute force over neighbor pairs.
double oracle_clustering(const Graph& g) {
  double total = 0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    auto nb = g.neighbors(i);
    const double k = static_cast<double>(nb.size());
    if (nb.size() < 2) continue;
    double tri = 0;
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b) tri += g.has_edge(nb[a], nb[b]);
    total += 2 * tri / (k * (k - 1));
  }
  return total / static_cast<double>(g.n());
}

}  // namespace

TEST_CASE("average path length") {
  CHECK(average_path_length(gen_complete(7)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(average_path_length(path(3)) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(average_path_length(gen_ring(8, 2)) == doctest::Approx(16.0 / 7.0).epsilon(1e-15));
  for (std::size_t n = 3; n <= 100; ++n) {
    // Mean circular distance on C_n.
    double s = 0;
    for (std::size_t d = 1; d < n; ++d) s += std::min(d, n - d);
    CHECK(average_path_length(gen_ring(n, 2)) == doctest::Approx(s / (n - 1)).epsilon(1e-13));
  }
  const Graph ws = gen_ws(120, 4, 0.3, 9);
  CHECK(average_path_length(ws) == doctest::Approx(oracle_path_length(ws)).epsilon(1e-13));
  CHECK(average_path_length(ws, 4) == average_path_length(ws, 1));
  CHECK_THROWS_AS(average_path_length(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}})), NumericError);
}

TEST_CASE("path length never grows when edges are added") {
  Graph g = gen_ring(60, 2);
  double prev = average_path_length(g);
  for (std::uint32_t i = 0; i < 20; ++i) {
    std::vector<Edge> e = g.edges();
    const std::uint32_t u = (7 * i) % 60, v = (7 * i + 13 + i) % 60;
    if (u == v || g.has_edge(u, v)) continue;
    e.push_back({u, v, 1.0});
    g = Graph(60, e);
    const double L = average_path_length(g);
    CHECK(L <= prev);
    prev = L;
  }
  CHECK(average_path_length(gen_ws_shortcut(80, 4, 0.1, 2)) <
        average_path_length(gen_ring(80, 4)));
}

TEST_CASE("clustering coefficient") {
  CHECK(clustering_coefficient(gen_complete(4)) == 1.0);
  CHECK(clustering_coefficient(star(4)) == 0.0);
  const Graph c5(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {0, 4, 1.0},
                     {0, 2, 1.0}});
  // Node 0: nbrs {1,2,4}, one triangle -> 1/3; node 1: {0,2} -> 1;
  // node 2: {0,1,3} -> 1/3; nodes 3, 4 -> 0.
  CHECK(clustering_coefficient(c5) == doctest::Approx((1.0 / 3 + 1 + 1.0 / 3) / 5).epsilon(1e-15));
  const Graph ws = gen_ws(200, 6, 0.1, 3);
  CHECK(clustering_coefficient(ws) == doctest::Approx(oracle_clustering(ws)).epsilon(1e-13));
}

TEST_CASE("degree statistics") {
  const auto k5 = degree_stats(gen_complete(5));
  CHECK(k5.k_min == 4);
  CHECK(k5.k_med == 4);
  CHECK(k5.k_max == 4);
  CHECK(k5.k_mean == 4.0);
  const auto s = degree_stats(star(4));
  CHECK(s.k_min == 1);
  CHECK(s.k_med == 1);
  CHECK(s.k_max == 4);
  CHECK(s.k_mean == doctest::Approx(1.6));
  const auto sf = degree_stats(
      gen_static_scale_free(800, 2, 3.0, 5, {Connectivity::kAllow, 100}));
  CHECK(sf.k_mean == 4.0);
}

TEST_CASE("target selection") {
  CHECK(select_target(star(4), TargetSelector::parse("max")) == 0);
  CHECK(select_target(star(4), TargetSelector::parse("min")) == 1);
  for (const char* p : {"min", "median", "max"}) {
    CHECK(select_target(gen_complete(5), TargetSelector::parse(p)) == 0);
  }
  const Graph ws = gen_ws(400, 4, 0.2, 1);
  const auto t = select_target(ws, TargetSelector::parse("median"));
  CHECK(t == select_target(gen_ws(400, 4, 0.2, 1), TargetSelector::parse("median")));
  CHECK(ws.degree(t) == degree_stats(ws).k_med);
  CHECK(select_target(ws, TargetSelector::parse("17")) == 17);
  CHECK_THROWS_AS(select_target(ws, TargetSelector::parse("400")), InvalidArgument);
  CHECK_THROWS_AS(TargetSelector::parse("hub"), InvalidArgument);
}

TEST_CASE("walk counts") {
  const auto p3 = walk_counts(path(3), 2);
  CHECK(p3[0].isIdentity());
  CHECK(p3[2](0, 2) == 1.0);
  CHECK(p3[2](0, 0) == 1.0);
  // Closed 4-walks on C4: six balanced step sequences plus two windings.
  CHECK(walk_counts(gen_ring(4, 2), 4)[4](0, 0) == 8.0);
  const Graph w = assign_random_weights(gen_complete(4), 5);
  const auto f = walk_counts(w, 1);
  for (const auto& e : w.edges()) CHECK(f[1](e.u, e.v) == e.w);
}

TEST_CASE("walk counts match exhaustive enumeration on all 6-node graphs") {
  // Every labeled graph on 6 nodes: 2^15 edge subsets.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) pairs.push_back({i, j});
  for (std::uint32_t mask = 0; mask < (1u << 15); mask += 7) {
    std::vector<Edge> e;
    for (int b = 0; b < 15; ++b)
      if (mask >> b & 1) e.push_back({static_cast<std::uint32_t>(pairs[b].first),
                                      static_cast<std::uint32_t>(pairs[b].second), 1.0});
    const Graph g(6, e);
    const auto f = walk_counts(g, 4);
    bool ok = true;
    for (int i = 0; i < 6 && ok; ++i) {
      // Count walks by depth-first enumeration from i.
      std::vector<std::vector<double>> cnt(5, std::vector<double>(6, 0));
      std::function<void(int, int)> dfs = [&](int v, int len) {
        cnt[len][v] += 1;
        if (len == 4) return;
        for (auto u : g.neighbors(v)) dfs(static_cast<int>(u), len + 1);
      };
      dfs(i, 0);
      for (int n = 0; n <= 4; ++n)
        for (int j = 0; j < 6; ++j) ok = ok && f[n](j, i) == cnt[n][j];
    }
    CHECK(ok);
  }
}
