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

#include "core/netgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace qsearch {
namespace {

std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Mutable edge set used while rewiring.
class EdgeSet {
 public:
  explicit EdgeSet(std::size_t n) : degree_(n, 0) {}

  bool contains(std::uint32_t u, std::uint32_t v) const {
    return keys_.count(edge_key(u, v)) != 0;
  }
  void add(std::uint32_t u, std::uint32_t v) {
    if (keys_.insert(edge_key(u, v)).second) {
      ++degree_[u];
      ++degree_[v];
    }
  }
  void remove(std::uint32_t u, std::uint32_t v) {
    if (keys_.erase(edge_key(u, v))) {
      --degree_[u];
      --degree_[v];
    }
  }
  std::size_t degree(std::uint32_t u) const { return degree_[u]; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(keys_.size());
    for (std::uint64_t key : keys_) {
      out.push_back({static_cast<std::uint32_t>(key >> 32),
                     static_cast<std::uint32_t>(key & 0xffffffffu), 1.0});
    }
    return out;  // Graph sorts
  }

 private:
  std::unordered_set<std::uint64_t> keys_;
  std::vector<std::size_t> degree_;
};

std::vector<Edge> dedupe(std::vector<Edge> edges) {
  for (Edge& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return a.u == b.u && a.v == b.v;
                          }),
              edges.end());
  return edges;
}

void check_ring_params(std::size_t n, std::size_t k) {
  if (n < 3) throw InvalidArgument("ring needs n >= 3");
  if (k < 2 || k % 2 != 0) throw InvalidArgument("ring needs even k >= 2");
  if (k >= n) throw InvalidArgument("ring needs k < n");
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
  }
}

std::vector<Edge> ring_edges(std::size_t n, std::size_t k) {
  std::vector<Edge> edges;
  edges.reserve(n * k / 2);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      edges.push_back({static_cast<std::uint32_t>(i),
                       static_cast<std::uint32_t>((i + j) % n), 1.0});
    }
  }
  return edges;
}

// Replaces the second endpoint of each listed edge with probability beta by a
// uniform node that is neither the first endpoint nor already adjacent to it.
void rewire(EdgeSet& set, const std::vector<Edge>& order, std::size_t n,
            double beta, Rng& rng) {
  for (const Edge& e : order) {
    if (!rng.bernoulli(beta)) continue;
    if (set.degree(e.u) + 1 >= n) continue;  // no admissible endpoint
    std::uint32_t v;
    do {
      v = static_cast<std::uint32_t>(rng.below(n));
    } while (v == e.u || set.contains(e.u, v));
    set.remove(e.u, e.v);
    set.add(e.u, v);
  }
}

template <class Draw>
Graph with_connectivity(const std::string& family, const Json& params,
                        std::uint64_t seed, const GenerationOptions& opts,
                        Draw draw) {
  if (opts.max_attempts < 1) throw InvalidArgument("max_attempts must be >= 1");
  const std::string text = params.dump();
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    Graph g = draw(derive_seed(family, text, seed,
                               static_cast<std::uint32_t>(attempt)));
    Json meta = g.metadata();
    meta["attempts"] = attempt + 1;
    switch (opts.connectivity) {
      case Connectivity::kAllow:
        return g.with_metadata(meta);
      case Connectivity::kLargestComponent: {
        std::size_t count = 0;
        auto label = component_labels(g, &count);
        meta["original_n"] = g.n();
        meta["lcc_extracted"] = count > 1;
        if (count == 1) return g.with_metadata(meta);
        std::vector<std::size_t> size(count, 0);
        for (auto l : label) ++size[l];
        auto best = static_cast<std::uint32_t>(
            std::max_element(size.begin(), size.end()) - size.begin());
        std::vector<std::uint32_t> nodes;
        for (std::size_t i = 0; i < g.n(); ++i) {
          if (label[i] == best) nodes.push_back(static_cast<std::uint32_t>(i));
        }
        return induced_subgraph(g, std::move(nodes)).with_metadata(meta);
      }
      case Connectivity::kRequire:
        if (g.is_connected()) return g.with_metadata(meta);
        break;
    }
  }
  throw GenerationError("family " + family + " params " + text + " seed " +
                        std::to_string(seed) + ": no connected graph after " +
                        std::to_string(opts.max_attempts) + " attempts");
}

std::uint32_t u32(std::size_t x) { return static_cast<std::uint32_t>(x); }

std::vector<Edge> gasket_corner_edges(int stage, std::size_t* n_out) {
  const std::int64_t side = std::int64_t{1} << stage;
  std::set<std::pair<std::int64_t, std::int64_t>> points;
  std::vector<std::pair<std::pair<std::int64_t, std::int64_t>,
                        std::pair<std::int64_t, std::int64_t>>>
      segs;
  // Triangle with corner (a, b) in lattice coordinates and the given side.
  auto rec = [&](auto&& self, std::int64_t a, std::int64_t b,
                 std::int64_t s) -> void {
    if (s == 1) {
      std::pair<std::int64_t, std::int64_t> p{a, b}, q{a + 1, b}, r{a, b + 1};
      points.insert(p);
      points.insert(q);
      points.insert(r);
      segs.push_back({p, q});
      segs.push_back({p, r});
      segs.push_back({q, r});
      return;
    }
    const std::int64_t h = s / 2;
    self(self, a, b, h);
    self(self, a + h, b, h);
    self(self, a, b + h, h);
  };
  rec(rec, 0, 0, side);
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint32_t> index;
  for (const auto& p : points) index.emplace(p, u32(index.size()));
  std::vector<Edge> edges;
  edges.reserve(segs.size());
  for (const auto& [p, q] : segs) edges.push_back({index[p], index[q], 1.0});
  *n_out = points.size();
  return edges;
}

std::vector<Edge> gasket_triangle_edges(int stage, std::size_t* n_out) {
  // Word x_0 x_1 ... x_{S-1} over {0,1,2} maps to sum x_h 3^{S-1-h}.
  // u = p i j^m and v = p j i^m are adjacent for i != j.
  std::size_t n = 1;
  for (int h = 0; h < stage; ++h) n *= 3;
  std::vector<Edge> edges;
  std::vector<int> word(stage);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = x;
    for (int h = stage - 1; h >= 0; --h) {
      word[h] = static_cast<int>(r % 3);
      r /= 3;
    }
    for (int h = 0; h < stage; ++h) {
      const int i = word[h];
      int j = -1;
      bool uniform_tail = true;
      for (int t = h + 1; t < stage; ++t) {
        if (j < 0) j = word[t];
        if (word[t] != j) uniform_tail = false;
      }
      if (!uniform_tail) continue;
      for (int jj = 0; jj < 3; ++jj) {
        if (jj == i) continue;
        if (h + 1 < stage && jj != j) continue;
        std::size_t y = 0;
        for (int t = 0; t < stage; ++t) {
          int digit = t < h ? word[t] : (t == h ? jj : i);
          y = 3 * y + digit;
        }
        if (x < y) edges.push_back({u32(x), u32(y), 1.0});
      }
    }
  }
  *n_out = n;
  return edges;
}

void check_stage(int stage) {
  if (stage < 1 || stage > 8) {
    throw InvalidArgument("gasket stage must lie in [1, 8]");
  }
}

}  // namespace

Graph gen_ring(std::size_t n, std::size_t k) {
  check_ring_params(n, k);
  return Graph(n, ring_edges(n, k), "ring", Json{{"n", n}, {"k", k}});
}

Graph gen_ws(std::size_t n, std::size_t k, double beta, std::uint64_t seed,
             const GenerationOptions& opts) {
  check_ring_params(n, k);
  check_probability(beta, "beta");
  Json params{{"n", n}, {"k", k}, {"beta", beta}};
  return with_connectivity("ws", params, seed, opts, [&](std::uint64_t s) {
    Rng rng(s);
    const std::vector<Edge> ring = ring_edges(n, k);
    EdgeSet set(n);
    for (const Edge& e : ring) set.add(e.u, e.v);
    // ring_edges lists rounds by increasing offset j, edge (i, i+j) with the
    // clockwise endpoint second.
    rewire(set, ring, n, beta, rng);
    return Graph(n, set.edges(), "ws", params, seed);
  });
}

Graph gen_ws_shortcut(std::size_t n, std::size_t k, double beta,
                      std::uint64_t seed) {
  check_ring_params(n, k);
  check_probability(beta, "beta");
  Json params{{"n", n}, {"k", k}, {"beta", beta}};
  Rng rng(derive_seed("ws_shortcut", params.dump(), seed, 0));
  std::vector<Edge> edges = ring_edges(n, k);
  const std::size_t half = k / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t dist = std::min(j - i, n - (j - i));
      if (dist <= half) continue;
      if (rng.bernoulli(beta)) edges.push_back({u32(i), u32(j), 1.0});
    }
  }
  return Graph(n, std::move(edges), "ws_shortcut", params, seed);
}

Graph gen_sierpinski_gasket(int stage, GasketVariant variant) {
  check_stage(stage);
  std::size_t n = 0;
  std::vector<Edge> edges = variant == GasketVariant::kCorner
                                ? gasket_corner_edges(stage, &n)
                                : gasket_triangle_edges(stage, &n);
  return Graph(n, std::move(edges), "gasket",
               Json{{"stage", stage}, {"variant", to_string(variant)}});
}

Graph gen_fractal_beta(int stage, double beta, std::uint64_t seed,
                       FractalMode mode, GasketVariant variant,
                       const GenerationOptions& opts) {
  check_stage(stage);
  check_probability(beta, "beta");
  const Graph base = gen_sierpinski_gasket(stage, variant);
  const std::size_t n = base.n();
  Json params{{"stage", stage},
              {"beta", beta},
              {"mode", to_string(mode)},
              {"variant", to_string(variant)}};
  return with_connectivity(
      "fractal_beta", params, seed, opts, [&](std::uint64_t s) {
        Rng rng(s);
        if (mode == FractalMode::kRewire) {
          EdgeSet set(n);
          for (const Edge& e : base.edges()) set.add(e.u, e.v);
          rewire(set, base.edges(), n, beta, rng);
          return Graph(n, set.edges(), "fractal_beta", params, seed);
        }
        std::vector<Edge> edges = base.edges();
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (base.has_edge(i, j)) continue;
            if (rng.bernoulli(beta)) edges.push_back({u32(i), u32(j), 1.0});
          }
        }
        return Graph(n, std::move(edges), "fractal_beta", params, seed);
      });
}

Graph gen_static_scale_free(std::size_t n, std::size_t m, double lambda,
                            std::uint64_t seed, const GenerationOptions& opts) {
  if (n < 10) throw InvalidArgument("static scale-free needs n >= 10");
  if (m < 1) throw InvalidArgument("static scale-free needs m >= 1");
  if (!(lambda >= 2.0)) throw InvalidArgument("lambda must be >= 2");
  if (m * n > n * (n - 1) / 2) {
    throw InvalidArgument("m*n exceeds the number of node pairs");
  }
  const double alpha = std::isinf(lambda) ? 0.0 : 1.0 / (lambda - 1.0);
  Json params{{"n", n}, {"m", m}, {"lambda", std::isinf(lambda) ? Json("inf") : Json(lambda)}};
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::pow(static_cast<double>(i + 1), -alpha);
    cumulative[i] = total;
  }
  const std::size_t target = m * n;
  const std::size_t max_draws = 1000 * target + 1000000;
  return with_connectivity("static_sf", params, seed, opts, [&](std::uint64_t s) {
    Rng rng(s);
    auto draw = [&]() {
      const double x = rng.uniform() * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
      return u32(std::min<std::size_t>(it - cumulative.begin(), n - 1));
    };
    EdgeSet set(n);
    std::size_t count = 0;
    for (std::size_t d = 0; count < target; ++d) {
      if (d >= max_draws) {
        throw GenerationError("static_sf: edge target not reached after " +
                              std::to_string(max_draws) + " draws");
      }
      const std::uint32_t i = draw();
      const std::uint32_t j = draw();
      if (i == j || set.contains(i, j)) continue;
      set.add(i, j);
      ++count;
    }
    return Graph(n, set.edges(), "static_sf", params, seed);
  });
}

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                      const GenerationOptions& opts) {
  if (n < 1) throw InvalidArgument("erdos-renyi needs n >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0, 1]");
  Json params{{"n", n}, {"p", p}};
  return with_connectivity("er", params, seed, opts, [&](std::uint64_t s) {
    Rng rng(s);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.bernoulli(p)) edges.push_back({u32(i), u32(j), 1.0});
      }
    }
    return Graph(n, std::move(edges), "er", params, seed);
  });
}

Graph gen_hypercube(int d) {
  if (d < 1 || d > 14) throw InvalidArgument("hypercube dimension must lie in [1, 14]");
  const std::size_t n = std::size_t{1} << d;
  std::vector<Edge> edges;
  for (std::size_t x = 0; x < n; ++x) {
    for (int b = 0; b < d; ++b) {
      const std::size_t y = x ^ (std::size_t{1} << b);
      if (x < y) edges.push_back({u32(x), u32(y), 1.0});
    }
  }
  return Graph(n, std::move(edges), "hypercube", Json{{"d", d}});
}

Graph gen_complete(std::size_t n) {
  if (n < 2) throw InvalidArgument("complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({u32(i), u32(j), 1.0});
  }
  return Graph(n, std::move(edges), "complete", Json{{"n", n}});
}

Graph gen_square_lattice(std::size_t nx, std::size_t ny, Boundary boundary) {
  if (nx < 2 || ny < 2) throw InvalidArgument("square lattice needs nx, ny >= 2");
  const bool wrap = boundary == Boundary::kPeriodic;
  auto id = [nx](std::size_t x, std::size_t y) { return u32(y * nx + x); };
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      if (x + 1 < nx) edges.push_back({id(x, y), id(x + 1, y), 1.0});
      else if (wrap && nx > 2) edges.push_back({id(x, y), id(0, y), 1.0});
      if (y + 1 < ny) edges.push_back({id(x, y), id(x, y + 1), 1.0});
      else if (wrap && ny > 2) edges.push_back({id(x, y), id(x, 0), 1.0});
    }
  }
  return Graph(nx * ny, dedupe(std::move(edges)), "square",
               Json{{"nx", nx}, {"ny", ny}, {"boundary", to_string(boundary)}});
}

Graph gen_hexagonal_lattice(std::size_t nx, std::size_t ny, Boundary boundary) {
  const bool wrap = boundary == Boundary::kPeriodic;
  if (nx < 1 || ny < 1) throw InvalidArgument("hexagonal lattice needs nx, ny >= 1");
  if (wrap && (nx < 2 || ny < 2)) {
    throw InvalidArgument("periodic hexagonal lattice needs nx, ny >= 2");
  }
  // Brick-wall honeycomb: cell (x, y) holds sites a = 2c and b = 2c+1;
  // b(x,y) bonds to a(x,y), a(x+1,y) and a(x,y+1).
  auto a = [nx](std::size_t x, std::size_t y) { return u32(2 * (y * nx + x)); };
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::uint32_t b = a(x, y) + 1;
      edges.push_back({a(x, y), b, 1.0});
      if (x + 1 < nx) edges.push_back({b, a(x + 1, y), 1.0});
      else if (wrap) edges.push_back({b, a(0, y), 1.0});
      if (y + 1 < ny) edges.push_back({b, a(x, y + 1), 1.0});
      else if (wrap) edges.push_back({b, a(x, 0), 1.0});
    }
  }
  return Graph(2 * nx * ny, std::move(edges), "hex",
               Json{{"nx", nx}, {"ny", ny}, {"boundary", to_string(boundary)}});
}

Graph gen_sierpinski_carpet(int s, int k) {
  if (s < 3 || s > 6) throw InvalidArgument("carpet scaling factor must lie in [3, 6]");
  if (k < 1) throw InvalidArgument("carpet iteration must be >= 1");
  double cells = std::pow(4.0 * (s - 1), k);
  if (cells > 160000.0) throw InvalidArgument("carpet size cap (20^4 nodes) exceeded");
  std::size_t side = 1;
  for (int i = 0; i < k; ++i) side *= static_cast<std::size_t>(s);
  auto kept = [&](std::size_t x, std::size_t y) {
    for (int i = 0; i < k; ++i) {
      const std::size_t dx = x % s, dy = y % s;
      if (dx >= 1 && dx + 1 < static_cast<std::size_t>(s) && dy >= 1 &&
          dy + 1 < static_cast<std::size_t>(s)) {
        return false;
      }
      x /= s;
      y /= s;
    }
    return true;
  };
  std::vector<std::uint32_t> index(side * side, UINT32_MAX);
  std::uint32_t n = 0;
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      if (kept(x, y)) index[y * side + x] = n++;
    }
  }
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const std::uint32_t c = index[y * side + x];
      if (c == UINT32_MAX) continue;
      if (x + 1 < side && index[y * side + x + 1] != UINT32_MAX) {
        edges.push_back({c, index[y * side + x + 1], 1.0});
      }
      if (y + 1 < side && index[(y + 1) * side + x] != UINT32_MAX) {
        edges.push_back({c, index[(y + 1) * side + x], 1.0});
      }
    }
  }
  return Graph(n, std::move(edges), "carpet", Json{{"s", s}, {"k", k}});
}

Graph assign_random_weights(const Graph& g, std::uint64_t seed) {
  if (g.weighted()) throw InvalidArgument("graph is already weighted");
  Rng rng(derive_seed("weights", "", seed, 0));
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e.w = rng.uniform_open_closed();
  Json params = g.params();
  params["weight_seed"] = seed;
  return Graph(g.n(), std::move(edges), g.family(), params, g.seed(), true,
               g.metadata());
}

Graph parse_edge_list(std::istream& in, EdgeListFormat format,
                      const std::string& source) {
  struct RawEdge {
    std::size_t u, v;
    double w;
    std::size_t line;
  };
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> label_index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = label_index.emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    return it->second;
  };
  auto fail = [&](std::size_t line, const std::string& msg) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
  };

  std::vector<RawEdge> raw;
  bool any_weight = false;
  std::string line;
  std::size_t lineno = 0;
  std::size_t declared_n = 0;
  std::size_t mm_entries = 0;
  bool mm_header_done = false;

  if (format == EdgeListFormat::kMatrixMarketPattern) {
    if (!std::getline(in, line)) fail(1, "missing MatrixMarket banner");
    lineno = 1;
    std::istringstream banner(line);
    std::string tag, object, layout, field, symmetry;
    banner >> tag >> object >> layout >> field >> symmetry;
    if (tag != "%%MatrixMarket" || object != "matrix" ||
        layout != "coordinate" || field != "pattern") {
      fail(1, "expected '%%MatrixMarket matrix coordinate pattern ...'");
    }
  }

  while (std::getline(in, line)) {
    ++lineno;
    const char comment = format == EdgeListFormat::kPlain ? '#' : '%';
    if (auto pos = line.find(comment); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (format == EdgeListFormat::kMatrixMarketPattern) {
      auto to_size = [&](const std::string& t) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size()) {
          fail(lineno, "expected a non-negative integer, got '" + t + "'");
        }
        return v;
      };
      if (!mm_header_done) {
        if (tok.size() != 3) fail(lineno, "expected 'rows cols entries'");
        const std::size_t rows = to_size(tok[0]), cols = to_size(tok[1]);
        if (rows != cols) fail(lineno, "adjacency matrix must be square");
        declared_n = rows;
        mm_entries = to_size(tok[2]);
        mm_header_done = true;
        continue;
      }
      if (tok.size() != 2) fail(lineno, "expected 'i j' for a pattern entry");
      const std::size_t i = to_size(tok[0]), j = to_size(tok[1]);
      if (i < 1 || j < 1 || i > declared_n || j > declared_n) {
        fail(lineno, "entry index out of range");
      }
      raw.push_back({i - 1, j - 1, 1.0, lineno});
      continue;
    }

    if (tok.size() != 2 && tok.size() != 3) fail(lineno, "expected 'i j [w]'");
    double w = 1.0;
    if (tok.size() == 3) {
      std::size_t used = 0;
      try {
        w = std::stod(tok[2], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[2].size()) fail(lineno, "malformed weight '" + tok[2] + "'");
      if (!(w > 0.0 && w <= 1.0)) fail(lineno, "weight must lie in (0, 1]");
      any_weight = true;
    }
    raw.push_back({intern(tok[0]), intern(tok[1]), w, lineno});
  }
  if (format == EdgeListFormat::kMatrixMarketPattern) {
    if (!mm_header_done) fail(lineno, "missing size line");
    if (raw.size() != mm_entries) {
      fail(lineno, "entry count " + std::to_string(raw.size()) +
                       " does not match header " + std::to_string(mm_entries));
    }
  }

  // Plain-format labels are ordered numerically when all are integers,
  // lexicographically otherwise.
  std::vector<std::size_t> remap;
  std::size_t n = declared_n;
  if (format == EdgeListFormat::kPlain) {
    n = labels.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    bool numeric = true;
    std::vector<long long> value(n, 0);
    for (std::size_t i = 0; i < n && numeric; ++i) {
      const std::string& t = labels[i];
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value[i]);
      numeric = ec == std::errc() && p == t.data() + t.size();
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return numeric ? value[a] < value[b] : labels[a] < labels[b];
    });
    remap.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) remap[order[r]] = r;
    std::vector<std::string> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[remap[i]] = labels[i];
    labels = std::move(sorted);
  } else {
    remap.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      remap[i] = i;
      labels.push_back(std::to_string(i + 1));
    }
  }

  std::size_t self_loops = 0, duplicates = 0;
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  for (const RawEdge& r : raw) {
    const std::uint32_t u = u32(remap[r.u]), v = u32(remap[r.v]);
    if (u == v) {
      ++self_loops;
      continue;
    }
    if (!seen.insert(edge_key(u, v)).second) {
      ++duplicates;
      continue;
    }
    edges.push_back({u, v, r.w});
  }
  if (edges.empty()) throw ParseError(source + ": empty graph");

  Json meta{{"source", source},
            {"format", format == EdgeListFormat::kPlain ? "plain"
                                                        : "matrix-market-pattern"},
            {"self_loops_dropped", self_loops},
            {"duplicates_dropped", duplicates},
            {"original_n", n}};
  Graph full(n, std::move(edges), "ingested", Json::object(), std::nullopt,
             any_weight);

  std::size_t count = 0;
  auto label = component_labels(full, &count);
  std::vector<std::uint32_t> nodes;
  if (count > 1) {
    std::vector<std::size_t> size(count, 0);
    for (auto l : label) ++size[l];
    auto best = static_cast<std::uint32_t>(
        std::max_element(size.begin(), size.end()) - size.begin());
    for (std::size_t i = 0; i < n; ++i) {
      if (label[i] == best) nodes.push_back(u32(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(u32(i));
  }
  meta["lcc_extracted"] = count > 1;
  Json kept_labels = Json::array();
  for (auto i : nodes) kept_labels.push_back(labels[i]);
  meta["labels"] = std::move(kept_labels);
  Graph g = count > 1 ? induced_subgraph(full, nodes) : full;
  if (g.edge_count() == 0) throw ParseError(source + ": empty graph");
  return g.with_metadata(meta);
}

Graph ingest_edge_list(const std::string& path, EdgeListFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_edge_list(in, format, path);
}

namespace {

// Reads typed parameters from a JSON object and rejects unused keys.
class ParamReader {
 public:
  ParamReader(const std::string& family, const Json& params)
      : family_(family), params_(params.is_null() ? Json::object() : params) {
    if (!params_.is_object()) {
      throw InvalidArgument(family_ + ": params must be a JSON object");
    }
  }

  template <class T>
  T get(const std::string& key) {
    used_.insert(key);
    if (!params_.contains(key)) {
      throw InvalidArgument(family_ + ": missing parameter '" + key + "'");
    }
    return convert<T>(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!params_.contains(key)) return fallback;
    return convert<T>(key);
  }

  void finish() const {
    for (auto it = params_.begin(); it != params_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw InvalidArgument(family_ + ": unknown parameter '" + it.key() + "'");
      }
    }
  }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const Json& v = params_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (v.is_string()) {
          const std::string s = v.get<std::string>();
          if (s == "inf") return std::numeric_limits<double>::infinity();
          return std::stod(s);
        }
        return v.get<double>();
      } else if constexpr (std::is_integral_v<T>) {
        if (v.is_number_float()) {
          const double d = v.get<double>();
          if (d != std::floor(d) || d < 0) throw std::invalid_argument("not integral");
          return static_cast<T>(d);
        }
        if (v.is_string()) return static_cast<T>(std::stoll(v.get<std::string>()));
        return v.get<T>();
      } else {
        return v.get<T>();
      }
    } catch (const std::exception&) {
      throw InvalidArgument(family_ + ": bad value for parameter '" + key + "'");
    }
  }

  std::string family_;
  Json params_;
  std::set<std::string> used_;
};

}  // namespace

Graph generate(const std::string& family, const Json& params,
               std::uint64_t seed) {
  ParamReader r(family, params);
  GenerationOptions opts;
  auto read_opts = [&]() {
    opts.connectivity =
        parse_connectivity(r.get<std::string>("connectivity", "require"));
    opts.max_attempts = r.get<int>("max_attempts", 100);
  };
  Graph g;
  if (family == "ring") {
    auto n = r.get<std::size_t>("n");
    g = gen_ring(n, r.get<std::size_t>("k", 4));
  } else if (family == "ws") {
    auto n = r.get<std::size_t>("n");
    auto k = r.get<std::size_t>("k", 4);
    auto beta = r.get<double>("beta");
    read_opts();
    g = gen_ws(n, k, beta, seed, opts);
  } else if (family == "ws_shortcut") {
    auto n = r.get<std::size_t>("n");
    auto k = r.get<std::size_t>("k", 4);
    g = gen_ws_shortcut(n, k, r.get<double>("beta"), seed);
  } else if (family == "gasket") {
    auto stage = r.get<int>("stage");
    g = gen_sierpinski_gasket(
        stage, parse_gasket_variant(r.get<std::string>("variant", "corner")));
  } else if (family == "fractal_beta") {
    auto stage = r.get<int>("stage");
    auto beta = r.get<double>("beta");
    auto mode = parse_fractal_mode(r.get<std::string>("mode", "rewire"));
    auto variant = parse_gasket_variant(r.get<std::string>("variant", "corner"));
    read_opts();
    g = gen_fractal_beta(stage, beta, seed, mode, variant, opts);
  } else if (family == "static_sf") {
    auto n = r.get<std::size_t>("n");
    auto m = r.get<std::size_t>("m", 2);
    auto lambda = r.get<double>("lambda");
    read_opts();
    g = gen_static_scale_free(n, m, lambda, seed, opts);
  } else if (family == "er") {
    auto n = r.get<std::size_t>("n");
    auto p = r.get<double>("p");
    read_opts();
    g = gen_erdos_renyi(n, p, seed, opts);
  } else if (family == "hypercube") {
    g = gen_hypercube(r.get<int>("d"));
  } else if (family == "complete") {
    g = gen_complete(r.get<std::size_t>("n"));
  } else if (family == "square" || family == "hex") {
    auto nx = r.get<std::size_t>("nx");
    auto ny = r.get<std::size_t>("ny");
    auto b = parse_boundary(r.get<std::string>("boundary", "open"));
    g = family == "square" ? gen_square_lattice(nx, ny, b)
                           : gen_hexagonal_lattice(nx, ny, b);
  } else if (family == "carpet") {
    auto s = r.get<int>("s");
    g = gen_sierpinski_carpet(s, r.get<int>("k"));
  } else {
    throw InvalidArgument("unknown family '" + family + "'");
  }
  r.finish();
  return g;
}

std::string to_string(Boundary b) {
  return b == Boundary::kOpen ? "open" : "periodic";
}
std::string to_string(GasketVariant v) {
  return v == GasketVariant::kCorner ? "corner" : "triangle";
}
std::string to_string(FractalMode m) {
  return m == FractalMode::kRewire ? "rewire" : "shortcut";
}
std::string to_string(Connectivity c) {
  switch (c) {
    case Connectivity::kRequire: return "require";
    case Connectivity::kLargestComponent: return "largest_component";
    case Connectivity::kAllow: return "allow";
  }
  return "require";
}

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::kOpen;
  if (s == "periodic") return Boundary::kPeriodic;
  throw InvalidArgument("boundary must be open|periodic, got '" + s + "'");
}
GasketVariant parse_gasket_variant(const std::string& s) {
  if (s == "corner") return GasketVariant::kCorner;
  if (s == "triangle") return GasketVariant::kTriangle;
  throw InvalidArgument("gasket variant must be corner|triangle, got '" + s + "'");
}
FractalMode parse_fractal_mode(const std::string& s) {
  if (s == "rewire") return FractalMode::kRewire;
  if (s == "shortcut") return FractalMode::kShortcut;
  throw InvalidArgument("mode must be rewire|shortcut, got '" + s + "'");
}
Connectivity parse_connectivity(const std::string& s) {
  if (s == "require") return Connectivity::kRequire;
  if (s == "largest_component") return Connectivity::kLargestComponent;
  if (s == "allow") return Connectivity::kAllow;
  throw InvalidArgument(
      "connectivity must be require|largest_component|allow, got '" + s + "'");
}
EdgeListFormat parse_edge_list_format(const std::string& s) {
  if (s == "plain") return EdgeListFormat::kPlain;
  if (s == "matrix-market-pattern" || s == "mm") {
    return EdgeListFormat::kMatrixMarketPattern;
  }
  throw InvalidArgument("format must be plain|matrix-market-pattern, got '" + s + "'");
}

}  // namespace qsearch
