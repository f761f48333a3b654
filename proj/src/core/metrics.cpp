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

#include "core/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include "core/error.hpp"

namespace qsearch {

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::size_t source) {
  std::vector<std::uint32_t> dist(g.n(), UINT32_MAX);
  std::vector<std::uint32_t> queue;
  queue.reserve(g.n());
  dist[source] = 0;
  queue.push_back(static_cast<std::uint32_t>(source));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    for (std::uint32_t u : g.neighbors(v)) {
      if (dist[u] == UINT32_MAX) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

namespace {

// Sum of hop distances from sources [begin, end); false if any is unreachable.
bool distance_sum(const Graph& g, std::size_t begin, std::size_t end,
                  std::uint64_t* total) {
  std::uint64_t sum = 0;
  for (std::size_t s = begin; s < end; ++s) {
    for (std::uint32_t d : bfs_distances(g, s)) {
      if (d == UINT32_MAX) return false;
      sum += d;
    }
  }
  *total = sum;
  return true;
}

}  // namespace

double average_path_length(const Graph& g, unsigned workers) {
  const std::size_t n = g.n();
  if (n < 2) throw InvalidArgument("average path length needs n >= 2");
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<char> ok(workers, 1);
  if (workers == 1) {
    ok[0] = distance_sum(g, 0, n, &partial[0]);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        ok[w] = distance_sum(g, n * w / workers, n * (w + 1) / workers,
                             &partial[w]);
      });
    }
  }
  std::uint64_t total = 0;
  for (unsigned w = 0; w < workers; ++w) {
    if (!ok[w]) throw NumericError("average path length: graph is disconnected");
    total += partial[w];
  }
  return static_cast<double>(total) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<double> local_clustering(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<double> c(n, 0.0);
  std::vector<char> mark(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    const std::size_t k = nb.size();
    if (k < 2) continue;
    for (auto v : nb) mark[v] = 1;
    std::size_t links = 0;
    for (auto v : nb) {
      for (auto u : g.neighbors(v)) {
        if (u > v && mark[u]) ++links;
      }
    }
    for (auto v : nb) mark[v] = 0;
    c[i] = 2.0 * static_cast<double>(links) /
           (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return c;
}

double clustering_coefficient(const Graph& g) {
  double sum = 0.0;
  for (double ci : local_clustering(g)) sum += ci;
  return sum / static_cast<double>(g.n());
}

DegreeStats degree_stats(const Graph& g) {
  std::vector<std::size_t> deg(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) deg[i] = g.degree(i);
  std::sort(deg.begin(), deg.end());
  DegreeStats s;
  s.k_min = deg.front();
  s.k_max = deg.back();
  s.k_med = deg[(deg.size() - 1) / 2];
  s.k_mean = 2.0 * static_cast<double>(g.edge_count()) /
             static_cast<double>(g.n());
  return s;
}

TargetSelector TargetSelector::parse(const std::string& text) {
  if (text == "min") return {TargetPolicy::kMin, 0};
  if (text == "median") return {TargetPolicy::kMedian, 0};
  if (text == "max") return {TargetPolicy::kMax, 0};
  std::string digits = text.rfind("explicit:", 0) == 0 ? text.substr(9) : text;
  std::size_t index = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size()) {
    throw InvalidArgument("target policy must be min|median|max|<index>, got '" +
                          text + "'");
  }
  return {TargetPolicy::kExplicit, index};
}

std::string TargetSelector::to_string() const {
  switch (policy) {
    case TargetPolicy::kMin: return "min";
    case TargetPolicy::kMedian: return "median";
    case TargetPolicy::kMax: return "max";
    case TargetPolicy::kExplicit: return "explicit:" + std::to_string(index);
  }
  return "min";
}

std::size_t select_target(const Graph& g, const TargetSelector& selector) {
  if (selector.policy == TargetPolicy::kExplicit) {
    if (selector.index >= g.n()) {
      throw InvalidArgument("target index " + std::to_string(selector.index) +
                            " out of range for n=" + std::to_string(g.n()));
    }
    return selector.index;
  }
  const DegreeStats s = degree_stats(g);
  const std::size_t want = selector.policy == TargetPolicy::kMin   ? s.k_min
                           : selector.policy == TargetPolicy::kMax ? s.k_max
                                                                   : s.k_med;
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (g.degree(i) == want) return i;
  }
  throw InvalidArgument("no node with the requested degree");  // unreachable
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = e.w;
    a(e.v, e.u) = e.w;
  }
  return a;
}

std::vector<Eigen::MatrixXd> walk_counts(const Graph& g, int n_max,
                                         std::size_t memory_cap_bytes) {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  const double bytes = static_cast<double>(n_max + 2) *
                       static_cast<double>(g.n()) * static_cast<double>(g.n()) *
                       sizeof(double);
  if (bytes > static_cast<double>(memory_cap_bytes)) {
    throw InvalidArgument("walk_counts would need " +
                          std::to_string(static_cast<long long>(bytes)) +
                          " bytes, above the cap of " +
                          std::to_string(memory_cap_bytes));
  }
  const Eigen::MatrixXd a = adjacency_matrix(g);
  std::vector<Eigen::MatrixXd> f;
  f.reserve(n_max + 1);
  f.push_back(Eigen::MatrixXd::Identity(g.n(), g.n()));
  for (int k = 1; k <= n_max; ++k) f.push_back(a * f.back());
  return f;
}

GraphMetrics compute_metrics(const Graph& g, unsigned workers) {
  GraphMetrics m;
  m.n = g.n();
  m.edge_count = g.edge_count();
  m.L = average_path_length(g, workers);
  m.C = clustering_coefficient(g);
  m.degrees = degree_stats(g);
  m.hop_distance_on_weighted = g.weighted();
  return m;
}

Json to_json(const GraphMetrics& m) {
  return Json{{"n", m.n},
              {"edge_count", m.edge_count},
              {"L", m.L},
              {"C", m.C},
              {"k_min", m.degrees.k_min},
              {"k_med", m.degrees.k_med},
              {"k_max", m.degrees.k_max},
              {"k_mean", m.degrees.k_mean},
              {"hop_distance_on_weighted", m.hop_distance_on_weighted}};
}

}  // namespace qsearch
