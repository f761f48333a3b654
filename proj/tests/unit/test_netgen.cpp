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

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/netgen.hpp"
#include "doctest.h"

using namespace qsearch;

namespace {

// Direct scan of the structural invariants every generator must keep.
void check_simple(const Graph& g) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& e : g.edges()) {
    CHECK(e.u < e.v);
    CHECK(e.v < g.n());
    CHECK(seen.insert({e.u, e.v}).second);
    if (g.weighted()) {
      CHECK(e.w > 0.0);
      CHECK(e.w <= 1.0);
    } else {
      CHECK(e.w == 1.0);
    }
  }
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (auto j : g.neighbors(i)) CHECK(g.has_edge(j, i));
  }
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("ring") {
  const Graph c4 = gen_ring(4, 2);
  CHECK(c4.edge_count() == 4);
  const Graph r = gen_ring(400, 4);
  CHECK(r.edge_count() == 800);
  for (std::size_t i = 0; i < r.n(); ++i) CHECK(r.degree(i) == 4);
  CHECK(r.has_edge(0, 399));
  CHECK(r.has_edge(0, 398));
  CHECK(gen_ring(3, 2).edge_count() == 3);
  CHECK_THROWS_AS(gen_ring(10, 3), InvalidArgument);
  CHECK_THROWS_AS(gen_ring(4, 4), InvalidArgument);
  check_simple(r);
}

TEST_CASE("ws rewiring") {
  CHECK(gen_ws(400, 4, 0.0, 17).edges() == gen_ring(400, 4).edges());
  const Graph g = gen_ws(400, 4, 1.0, 1);
  CHECK(g.edge_count() == 800);
  std::set<std::size_t> degrees;
  for (std::size_t i = 0; i < g.n(); ++i) degrees.insert(g.degree(i));
  CHECK(degrees.size() > 1);
  const Graph small = gen_ws(27, 4, 0.6, 7);
  CHECK(small.n() == 27);
  CHECK(small.edge_count() == 54);
  CHECK(small.is_connected());
  check_simple(small);
  for (double beta : {0.05, 0.3, 0.9}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Graph w = gen_ws(60, 4, beta, seed);
      CHECK(w.edge_count() == 120);
      CHECK(w.is_connected());
    }
  }
  CHECK(gen_ws(400, 4, 0.2, 5).edges() == gen_ws(400, 4, 0.2, 5).edges());
  CHECK(gen_ws(400, 4, 0.2, 5).edges() != gen_ws(400, 4, 0.2, 6).edges());
  CHECK_THROWS_AS(gen_ws(10, 4, 1.5, 0), InvalidArgument);
}

TEST_CASE("ws shortcut variant") {
  CHECK(gen_ws_shortcut(10, 2, 0.0, 1).edges() == gen_ring(10, 2).edges());
  CHECK(gen_ws_shortcut(10, 2, 1.0, 1).edge_count() == 45);
  int more = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = gen_ws_shortcut(50, 4, 0.1, seed);
    CHECK(g.edge_count() >= 100);
    more += g.edge_count() > 100;
  }
  CHECK(more == 100);
}

TEST_CASE("sierpinski gasket, corner convention") {
  CHECK(gen_sierpinski_gasket(1).n() == 6);
  CHECK(gen_sierpinski_gasket(1).edge_count() == 9);
  for (int s = 1; s <= 6; ++s) {
    const Graph g = gen_sierpinski_gasket(s);
    CHECK(g.n() == (ipow(3, s + 1) + 3) / 2);
    CHECK(g.edge_count() == ipow(3, s + 1));
    CHECK(g.is_connected());
    // Three corners of degree 2, all other vertices degree 4.
    std::size_t deg2 = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
      CHECK((g.degree(i) == 2 || g.degree(i) == 4));
      deg2 += g.degree(i) == 2;
    }
    CHECK(deg2 == 3);
    check_simple(g);
  }
  CHECK(gen_sierpinski_gasket(4).n() == 123);
  CHECK_THROWS_AS(gen_sierpinski_gasket(0), InvalidArgument);
  CHECK_THROWS_AS(gen_sierpinski_gasket(9), InvalidArgument);
}

TEST_CASE("sierpinski gasket, triangle convention") {
  for (int s = 1; s <= 6; ++s) {
    const Graph g = gen_sierpinski_gasket(s, GasketVariant::kTriangle);
    CHECK(g.n() == ipow(3, s));
    CHECK(g.edge_count() == 3 * (ipow(3, s) - 1) / 2);
    CHECK(g.is_connected());
    std::size_t deg2 = 0;
    for (std::size_t i = 0; i < g.n(); ++i) deg2 += g.degree(i) == 2;
    CHECK(deg2 == 3);
  }
}

TEST_CASE("fractal beta") {
  CHECK(gen_fractal_beta(3, 0.0, 5, FractalMode::kRewire).edges() ==
        gen_sierpinski_gasket(3).edges());
  const Graph base = gen_sierpinski_gasket(4);
  const Graph g = gen_fractal_beta(4, 0.2, 11, FractalMode::kRewire);
  CHECK(g.edge_count() == base.edge_count());
  CHECK(g.edges() != base.edges());
  CHECK(g.is_connected());
  const Graph dense = gen_fractal_beta(3, 1.0, 1, FractalMode::kShortcut);
  CHECK(dense.edge_count() == dense.n() * (dense.n() - 1) / 2);
  const Graph tri = gen_fractal_beta(3, 0.1, 2, FractalMode::kRewire, GasketVariant::kTriangle);
  CHECK(tri.n() == 27);
  CHECK(tri.edge_count() == 39);
}

TEST_CASE("static scale-free") {
  GenerationOptions allow{Connectivity::kAllow, 100};
  const Graph g = gen_static_scale_free(800, 2, 3.0, 5, allow);
  CHECK(g.edge_count() == 1600);
  CHECK(2.0 * g.edge_count() / g.n() == 4.0);
  const Graph u = gen_static_scale_free(100, 2, INFINITY, 1, allow);
  CHECK(u.edge_count() == 200);
  CHECK_THROWS_AS(gen_static_scale_free(100, 2, 1.5, 1, allow), InvalidArgument);
  // Largest-component mode keeps a connected graph and records the size.
  const Graph lcc = gen_static_scale_free(400, 2, 2.5, 3,
                                          {Connectivity::kLargestComponent, 1});
  CHECK(lcc.is_connected());
  CHECK(lcc.metadata()["original_n"].get<std::size_t>() == 400);
  check_simple(lcc);
}

TEST_CASE("erdos renyi") {
  CHECK(gen_erdos_renyi(5, 1.0, 3).edge_count() == 10);
  const Graph g = gen_erdos_renyi(400, 0.1, 2);
  const double mean = 0.1 * 400 * 399 / 2, sd = std::sqrt(mean * 0.9);
  CHECK(std::abs(static_cast<double>(g.edge_count()) - mean) <= 3 * sd);
  CHECK(g.is_connected());
  const Graph sparse = gen_erdos_renyi(50, 0.1, 4);
  CHECK(sparse.is_connected());
  CHECK(sparse.metadata().contains("attempts"));
  CHECK_THROWS_AS(gen_erdos_renyi(50, 0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(gen_erdos_renyi(200, 0.001, 4, {Connectivity::kRequire, 3}),
                  GenerationError);
}

TEST_CASE("hypercube and complete") {
  CHECK(gen_hypercube(1).edge_count() == 1);
  CHECK(gen_hypercube(3).n() == 8);
  CHECK(gen_hypercube(3).edge_count() == 12);
  const Graph h = gen_hypercube(8);
  CHECK(h.n() == 256);
  CHECK(h.edge_count() == 1024);
  for (std::size_t i = 0; i < h.n(); ++i) {
    for (auto j : h.neighbors(i)) CHECK(std::popcount(i ^ j) == 1);
  }
  CHECK_THROWS_AS(gen_hypercube(15), InvalidArgument);
  CHECK(gen_complete(2).edge_count() == 1);
  CHECK(gen_complete(4).edge_count() == 6);
  CHECK(gen_complete(256).edge_count() == 32640);
}

TEST_CASE("lattices") {
  CHECK(gen_square_lattice(2, 2).edge_count() == 4);
  CHECK(gen_square_lattice(3, 3).edge_count() == 12);
  const Graph torus = gen_square_lattice(20, 20, Boundary::kPeriodic);
  CHECK(torus.edge_count() == 800);
  for (std::size_t i = 0; i < torus.n(); ++i) CHECK(torus.degree(i) == 4);
  const Graph hex = gen_hexagonal_lattice(10, 20, Boundary::kPeriodic);
  CHECK(hex.n() == 400);
  CHECK(hex.edge_count() == 600);
  for (std::size_t i = 0; i < hex.n(); ++i) CHECK(hex.degree(i) == 3);
  CHECK(gen_hexagonal_lattice(15, 30, Boundary::kPeriodic).n() == 900);
  const Graph frag = gen_hexagonal_lattice(1, 2);
  CHECK(frag.n() == 4);
  CHECK(frag.is_connected());
  check_simple(hex);
}

TEST_CASE("sierpinski carpet against a cell-membership oracle") {
  CHECK(gen_sierpinski_carpet(3, 1).n() == 8);
  CHECK(gen_sierpinski_carpet(3, 1).edge_count() == 8);
  for (auto [s, k] : {std::pair{3, 1}, {3, 2}, {4, 2}, {5, 2}, {3, 3}}) {
    const Graph g = gen_sierpinski_carpet(s, k);
    CHECK(g.n() == ipow(4 * (s - 1), k));
    // Oracle: cell (x, y) survives when no base-s digit pair lands in the
    // central (s-2)x(s-2) block; edges join side-sharing survivors.
    const std::size_t side = ipow(s, k);
    auto alive = [&](std::size_t x, std::size_t y) {
      for (int d = 0; d < k; ++d) {
        const std::size_t dx = x % s, dy = y % s;
        if (dx >= 1 && dx <= static_cast<std::size_t>(s - 2) && dy >= 1 &&
            dy <= static_cast<std::size_t>(s - 2)) {
          return false;
        }
        x /= s;
        y /= s;
      }
      return true;
    };
    std::size_t cells = 0, edges = 0;
    for (std::size_t y = 0; y < side; ++y) {
      for (std::size_t x = 0; x < side; ++x) {
        if (!alive(x, y)) continue;
        ++cells;
        if (x + 1 < side && alive(x + 1, y)) ++edges;
        if (y + 1 < side && alive(x, y + 1)) ++edges;
      }
    }
    CHECK(g.n() == cells);
    CHECK(g.edge_count() == edges);
    CHECK(g.is_connected());
  }
  CHECK(gen_sierpinski_carpet(5, 2).n() == 256);
  CHECK(gen_sierpinski_carpet(6, 4).n() == 160000);
  CHECK_THROWS_AS(gen_sierpinski_carpet(4, 5), InvalidArgument);
}

TEST_CASE("random weights") {
  const Graph k3 = gen_complete(3);
  const Graph w = assign_random_weights(k3, 1);
  CHECK(w.weighted());
  for (const auto& e : w.edges()) {
    CHECK(e.w > 0.0);
    CHECK(e.w <= 1.0);
  }
  CHECK(assign_random_weights(k3, 1).edges() == w.edges());
  const Graph gs = gen_sierpinski_gasket(3);
  CHECK(assign_random_weights(gs, 1).edges() != assign_random_weights(gs, 2).edges());
  CHECK_THROWS_AS(assign_random_weights(w, 3), InvalidArgument);
}

TEST_CASE("edge-list ingest") {
  std::istringstream p3("0 1\n1 2\n");
  const Graph g = parse_edge_list(p3, EdgeListFormat::kPlain);
  CHECK(g.n() == 3);
  CHECK(g.edge_count() == 2);

  std::istringstream dup("# comment\n0 1\n0 1\n1 2\n2 2\n");
  const Graph d = parse_edge_list(dup, EdgeListFormat::kPlain);
  CHECK(d.edge_count() == 2);
  CHECK(d.metadata()["duplicates_dropped"] == 1);
  CHECK(d.metadata()["self_loops_dropped"] == 1);

  std::istringstream two("a b\nb c\nc a\nx y\n");
  const Graph t = parse_edge_list(two, EdgeListFormat::kPlain);
  CHECK(t.n() == 3);
  CHECK(t.metadata()["lcc_extracted"] == true);
  CHECK(t.metadata()["original_n"] == 5);

  std::istringstream mm(
      "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 2\n2 1\n3 2\n");
  CHECK(parse_edge_list(mm, EdgeListFormat::kMatrixMarketPattern).edge_count() == 2);

  std::istringstream bad("0 1\n1\n");
  CHECK_THROWS_AS(parse_edge_list(bad, EdgeListFormat::kPlain), ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(parse_edge_list(empty, EdgeListFormat::kPlain), ParseError);
}

TEST_CASE("generate dispatches by family and rejects unknown keys") {
  CHECK(generate("ws", {{"n", 400}, {"k", 4}, {"beta", 0.2}}, 1).edge_count() == 800);
  CHECK(generate("gasket", {{"stage", 3}}, 0).n() == 42);
  CHECK(generate("complete", {{"n", 2}}, 0).edge_count() == 1);
  CHECK(generate("static_sf", {{"n", 100}, {"lambda", "inf"}, {"connectivity", "allow"}}, 0)
            .edge_count() == 200);
  CHECK_THROWS_AS(generate("ws", {{"n", 400}, {"beta", 0.2}, {"bogus", 1}}, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(generate("nope", Json::object(), 1), InvalidArgument);
}
