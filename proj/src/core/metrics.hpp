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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/graph.hpp"

namespace qsearch {

struct DegreeStats {
  std::size_t k_min = 0;
  std::size_t k_med = 0;  // lower median
  std::size_t k_max = 0;
  double k_mean = 0.0;
};

struct GraphMetrics {
  std::size_t n = 0;
  std::size_t edge_count = 0;
  double L = 0.0;  // hop count, also on weighted graphs
  double C = 0.0;
  DegreeStats degrees;
  bool hop_distance_on_weighted = false;
};

// Hop distances from `source`; unreachable nodes get UINT32_MAX.
std::vector<std::uint32_t> bfs_distances(const Graph& g, std::size_t source);

// Mean hop distance over ordered pairs. Throws NumericError when
// disconnected. `workers` > 1 splits the sources across threads; the integer
// total makes the result independent of the split.
double average_path_length(const Graph& g, unsigned workers = 1);

std::vector<double> local_clustering(const Graph& g);
double clustering_coefficient(const Graph& g);

DegreeStats degree_stats(const Graph& g);

enum class TargetPolicy { kMin, kMedian, kMax, kExplicit };

struct TargetSelector {
  TargetPolicy policy = TargetPolicy::kMin;
  std::size_t index = 0;  // used by kExplicit

  // "min", "median", "max", or a node index.
  static TargetSelector parse(const std::string& text);
  std::string to_string() const;
};

std::size_t select_target(const Graph& g, const TargetSelector& selector);

// f_n = A^n for n = 0..n_max (weighted sums on weighted graphs).
std::vector<Eigen::MatrixXd> walk_counts(
    const Graph& g, int n_max, std::size_t memory_cap_bytes = std::size_t{1} << 30);

Eigen::MatrixXd adjacency_matrix(const Graph& g);

GraphMetrics compute_metrics(const Graph& g, unsigned workers = 1);
Json to_json(const GraphMetrics& m);

}  // namespace qsearch
