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

#include <cmath>
#include <complex>
#include <random>

#include "core/ctqw.hpp"
#include "core/error.hpp"
#include "core/netgen.hpp"
#include "doctest.h"

using namespace qsearch;
using cd = std::complex<double>;

namespace {

Graph k2() { return gen_complete(2); }

Graph p3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

// Closed-form exp(-iHt) for a real symmetric 2x2 H, applied to |s>.
cd k2_amplitude(double gamma, double t) {
  const double a = gamma - 1.0, c = gamma, b = -gamma;
  const double m = 0.5 * (a + c), d = 0.5 * (a - c);
  const double om = std::sqrt(d * d + b * b);
  const cd ph = std::exp(cd(0, -m * t));
  const double co = std::cos(om * t), si = std::sin(om * t) / om;
  // <0| [cos - i sin/om (H - m)] |s>, |s> = (1, 1)/sqrt2.
  const cd row0 = co * 1.0 - cd(0, 1) * si * (d * 1.0 + b * 1.0);
  return ph * row0 / std::sqrt(2.0);
}

// Classical RK4 on i dpsi/dt = H psi, independent of the library oracle.
cd rk4(const Eigen::MatrixXd& h, std::size_t w, double t, int steps) {
  const Eigen::Index n = h.rows();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(double(n)));
  const double dt = t / steps;
  auto f = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return cd(0, -1) * (h.cast<cd>() * v);
  };
  for (int s = 0; s < steps; ++s) {
    const auto k1 = f(psi);
    const auto k2 = f(psi + 0.5 * dt * k1);
    const auto k3 = f(psi + 0.5 * dt * k2);
    const auto k4 = f(psi + dt * k3);
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi[static_cast<Eigen::Index>(w)];
}

}  // namespace

TEST_CASE("hamiltonian entries") {
  const auto h = build_hamiltonian(k2(), 1.0, 0);
  Eigen::Matrix2d expect;
  expect << 0, -1, -1, 1;
  CHECK(h.matrix == expect);
  const auto hp = build_hamiltonian(p3(), 0.5, 1);
  Eigen::Matrix3d e3;
  e3 << 0.5, -0.5, 0, -0.5, 0.0, -0.5, 0, -0.5, 0.5;
  CHECK(hp.matrix == e3);
  const auto hg = build_hamiltonian(gen_sierpinski_gasket(2), 0.3, 0);
  Eigen::MatrixXd lap = hg.matrix;
  lap(0, 0) += 1.0;
  CHECK(lap.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(hg.matrix == hg.matrix.transpose());
  CHECK_THROWS_AS(build_hamiltonian(k2(), 0.0, 0), InvalidArgument);
  CHECK_THROWS_AS(build_hamiltonian(k2(), 1.0, 2), InvalidArgument);
}

TEST_CASE("eigendecomposition invariants") {
  const auto sd = eigendecompose(build_hamiltonian(k2(), 1.0, 0));
  CHECK(sd.energies()[0] == doctest::Approx((1 - std::sqrt(5.0)) / 2).epsilon(1e-14));
  CHECK(sd.energies()[1] == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-14));
  CHECK(energy_gap(sd) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));

  const Graph ws = gen_ws(100, 4, 0.3, 2);
  const auto h = build_hamiltonian(ws, 0.4, 7);
  const auto d = eigendecompose(h);
  const auto& V = d.vectors();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(100, 100);
  CHECK((V * V.transpose() - I).cwiseAbs().maxCoeff() <= 1e-10);
  const Eigen::MatrixXd rec = V * d.energies().asDiagonal() * V.transpose();
  CHECK((rec - h.matrix).cwiseAbs().maxCoeff() <= 1e-8 * d.max_abs_energy());
  for (Eigen::Index k = 1; k < 100; ++k) CHECK(d.energies()[k] >= d.energies()[k - 1]);
  CHECK(d.s_projection().squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));

  const auto free = eigendecompose(build_hamiltonian(ws, 0.4, 7, 0.0));
  CHECK(std::abs(free.energies()[0]) <= 1e-12);
  CHECK(std::abs(free.s_projection()[0]) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(eigendecompose(h, EigenOptions{50}), InvalidArgument);
}

TEST_CASE("overlaps and gaps") {
  const Graph ws = gen_ws(60, 4, 0.2, 4);
  const auto free = overlaps(eigendecompose(build_hamiltonian(ws, 0.3, 0, 0.0)));
  CHECK(free.o0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(free.o1 <= 1e-20);

  for (double g : {0.05, 0.3, 2.0}) {
    const auto o = overlaps(eigendecompose(build_hamiltonian(k2(), g, 0)));
    const double s2 = 2 * g / std::sqrt(1 + 4 * g * g);
    CHECK(o.o0 == doctest::Approx((1 + s2) / 2).epsilon(1e-13));
    CHECK(o.o1 == doctest::Approx((1 - s2) / 2).epsilon(1e-12));
  }

  // gamma_w = 0: the gap is gamma times the algebraic connectivity.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian_matrix(ws));
  const auto sd = eigendecompose(build_hamiltonian(ws, 0.3, 0, 0.0));
  CHECK(energy_gap(sd) == doctest::Approx(0.3 * es.eigenvalues()[1]).epsilon(1e-10));
  const auto c4 = eigendecompose(build_hamiltonian(gen_ring(4, 2), 0.5, 0, 0.0));
  CHECK(energy_gap(c4) == doctest::Approx(0.5 * 2.0).epsilon(1e-12));
}

TEST_CASE("amplitudes") {
  const Graph ws = gen_ws(50, 4, 0.3, 1);
  const auto sd = eigendecompose(build_hamiltonian(ws, 0.5, 3));
  CHECK(std::abs(amplitude(sd, 0.0) - cd(1 / std::sqrt(50.0), 0)) <= 1e-12);
  for (double t : {0.3, 1.0, 4.5}) {
    const auto s = eigendecompose(build_hamiltonian(k2(), 0.8, 0));
    CHECK(std::abs(amplitude(s, t) - k2_amplitude(0.8, t)) <= 1e-12);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    CHECK(std::norm(amplitude(sd, t)) <= 1.0 + 1e-12);
  }
  for (double t : {0.0, 1.7, 123.4}) {
    CHECK(evolve_uniform_state(sd, t).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("amplitude agrees with an RK4 integration") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = gen_ws(16 + seed, 4, 0.4, seed);
    const auto h = build_hamiltonian(g, 0.6, seed % g.n());
    const auto sd = eigendecompose(h);
    CHECK(std::abs(amplitude(sd, 3.0) - rk4(h.matrix, h.target, 3.0, 4000)) <= 1e-6);
  }
}

TEST_CASE("probability series") {
  const auto free = eigendecompose(build_hamiltonian(gen_ws(30, 4, 0.2, 1), 0.3, 0, 0.0));
  for (double p : probability_series(free, {0.0, 1.0, 10.0, 100.0})) {
    CHECK(p == doctest::Approx(1.0 / 30).epsilon(1e-10));
  }
  const auto kn = eigendecompose(build_hamiltonian(gen_complete(16), 1.0 / 16, 0));
  std::vector<double> grid;
  for (int i = 0; i < 4000; ++i) grid.push_back(0.01 * i);
  const auto ps = probability_series(kn, grid);
  CHECK(ps[0] == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(*std::max_element(ps.begin(), ps.end()) >= 0.95);
  for (double p : ps) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(probability_series(kn, {1.0, 0.5}), InvalidArgument);

  // The phase recurrence matches direct evaluation across resyncs.
  const auto sd = eigendecompose(build_hamiltonian(gen_ws(80, 4, 0.3, 5), 0.4, 2));
  const auto fast = probability_series_uniform(sd, 0.37, 5000, 1024);
  std::vector<double> g2;
  for (int i = 0; i < 5000; ++i) g2.push_back(0.37 * i);
  const auto slow = probability_series(sd, g2);
  double err = 0;
  for (int i = 0; i < 5000; ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
  CHECK(err <= 1e-11);
}

TEST_CASE("rank-one levels match full diagonalization") {
  for (const Graph& g : {gen_ws(90, 4, 0.3, 3), gen_sierpinski_gasket(3),
                         gen_hypercube(5), gen_sierpinski_carpet(3, 2)}) {
    const RankOneSpectrum r(g, 1);
    for (double gamma : {0.01, 0.1, 0.5, 1.5, 4.0}) {
      const auto lv = r.lowest_levels(gamma);
      const auto sd = eigendecompose(build_hamiltonian(g, gamma, 1));
      const auto ov = overlaps(sd);
      CHECK(lv.e0 == doctest::Approx(sd.energies()[0]).epsilon(1e-9));
      CHECK(lv.e1 - lv.e0 == doctest::Approx(visible_gap(sd)).epsilon(1e-8));
      CHECK(std::abs(lv.o0 - ov.o0) <= 1e-9);
      CHECK(std::abs(lv.o1 - ov.o1) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(RankOneSpectrum(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}), 0), NumericError);
}
