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

#include <cstdint>
#include <istream>
#include <string>

#include "core/graph.hpp"

namespace qsearch {

enum class Boundary { kOpen, kPeriodic };

// kCorner: corner points of the subdivided triangle, (3^{S+1}+3)/2 vertices.
// kTriangle: Sierpinski graph S(S,3), 3^S vertices; stage-S copies are
// joined by single bridge edges instead of shared corners.
enum class GasketVariant { kCorner, kTriangle };

enum class FractalMode { kRewire, kShortcut };

// kRequire regenerates with derived sub-seeds and fails after max_attempts.
// kLargestComponent keeps the largest component of the first draw and
// records the extraction in metadata. kAllow returns the draw as is.
enum class Connectivity { kRequire, kLargestComponent, kAllow };

struct GenerationOptions {
  Connectivity connectivity = Connectivity::kRequire;
  int max_attempts = 100;
};

enum class EdgeListFormat { kPlain, kMatrixMarketPattern };

Graph gen_ring(std::size_t n, std::size_t k);
Graph gen_ws(std::size_t n, std::size_t k, double beta, std::uint64_t seed,
             const GenerationOptions& opts = {});
Graph gen_ws_shortcut(std::size_t n, std::size_t k, double beta,
                      std::uint64_t seed);
Graph gen_sierpinski_gasket(int stage,
                            GasketVariant variant = GasketVariant::kCorner);
Graph gen_fractal_beta(int stage, double beta, std::uint64_t seed,
                       FractalMode mode,
                       GasketVariant variant = GasketVariant::kCorner,
                       const GenerationOptions& opts = {});
// lambda = +inf selects uniform selection probabilities (alpha = 0).
Graph gen_static_scale_free(std::size_t n, std::size_t m, double lambda,
                            std::uint64_t seed,
                            const GenerationOptions& opts = {});
Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                      const GenerationOptions& opts = {});
Graph gen_hypercube(int d);
Graph gen_complete(std::size_t n);
Graph gen_square_lattice(std::size_t nx, std::size_t ny,
                         Boundary boundary = Boundary::kOpen);
Graph gen_hexagonal_lattice(std::size_t nx, std::size_t ny,
                            Boundary boundary = Boundary::kOpen);
Graph gen_sierpinski_carpet(int s, int k);

Graph assign_random_weights(const Graph& g, std::uint64_t seed);

Graph ingest_edge_list(const std::string& path, EdgeListFormat format);
Graph parse_edge_list(std::istream& in, EdgeListFormat format,
                      const std::string& source = "<stream>");

// Dispatch by family tag with parameters given as a JSON object, e.g.
// {"n":400,"k":4,"beta":0.2}. Unknown keys are rejected.
Graph generate(const std::string& family, const Json& params,
               std::uint64_t seed);

std::string to_string(Boundary b);
std::string to_string(GasketVariant v);
std::string to_string(FractalMode m);
std::string to_string(Connectivity c);
Boundary parse_boundary(const std::string& s);
GasketVariant parse_gasket_variant(const std::string& s);
FractalMode parse_fractal_mode(const std::string& s);
Connectivity parse_connectivity(const std::string& s);
EdgeListFormat parse_edge_list_format(const std::string& s);

}  // namespace qsearch
