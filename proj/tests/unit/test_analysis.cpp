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
#include <cmath>
#include <random>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "doctest.h"

using namespace qsearch;

TEST_CASE("power law recovery and scale equivariance") {
  std::vector<double> xs{3, 7, 15, 40, 81}, ys;
  for (double x : xs) ys.push_back(2 * std::sqrt(x));
  const auto f = fit_power_law(xs, ys);
  CHECK(std::abs(f.value("u") - 2.0) <= 1e-12);
  CHECK(std::abs(f.value("b") - 0.5) <= 1e-12);
  CHECK(f.residual_rms <= 1e-12);

  std::vector<double> noisy{1.1, 1.9, 3.2, 3.8, 5.3};
  const auto a = fit_power_law(xs, noisy);
  std::vector<double> scaled;
  for (double y : noisy) scaled.push_back(y * 7.5);
  const auto b = fit_power_law(xs, scaled);
  CHECK(b.value("u") == doctest::Approx(7.5 * a.value("u")).epsilon(1e-12));
  CHECK(b.value("b") == doctest::Approx(a.value("b")).epsilon(1e-12));
  CHECK(a.error("b") > 0);

  CHECK_THROWS_AS(fit_power_law({1, 2}, {1, 2}), InvalidArgument);
  CHECK_THROWS_AS(fit_power_law({1, 2, 3}, {1, -2, 3}), InvalidArgument);
}

TEST_CASE("exponent drift recovery") {
  std::vector<double> ns, al;
  for (double n = 100; n <= 2000; n += 100) {
    ns.push_back(n);
    al.push_back(1.04 + 2.7 * std::pow(n, -0.46));
  }
  const auto f = fit_exponent_drift(ns, al);
  CHECK(std::abs(f.value("p") - 1.04) <= 1e-6);
  CHECK(std::abs(f.value("q") - 2.7) <= 1e-6);
  CHECK(std::abs(f.value("r") + 0.46) <= 1e-6);

  const auto c = fit_exponent_drift({100, 200, 400, 800}, {1.3, 1.3, 1.3, 1.3});
  CHECK(std::abs(c.value("q")) <= 1e-9);
  CHECK(c.value("p") == doctest::Approx(1.3).epsilon(1e-12));
  CHECK_THROWS_AS(fit_exponent_drift({1, 2, 3}, {1, 2, 3}), InvalidArgument);
}

TEST_CASE("scaling functions recover their parameters") {
  std::vector<double> gammas;
  for (int i = 0; i < 24; ++i) gammas.push_back(0.05 * std::pow(1.25, i));
  auto sample = [&](ScalingModel m, const std::vector<double>& p) {
    std::vector<std::pair<double, double>> pts;
    for (double g : gammas) pts.push_back({g, scaling_function(m, p, g)});
    return pts;
  };
  const std::vector<double> p1{0.991, 0.086, 1.68, 1.0};
  const auto fixed = fit_scaling_function(sample(ScalingModel::kF1, p1), ScalingModel::kF1,
                                          {{"D", 1.0}});
  CHECK(std::abs(fixed.value("A") - 0.991) <= 1e-4);
  CHECK(std::abs(fixed.value("B") - 0.086) <= 1e-4);
  CHECK(std::abs(fixed.value("C") - 1.68) <= 1e-4);
  CHECK(fixed.value("D") == 1.0);
  CHECK(fixed.rmspe <= 1e-8);

  // Frozen (A, B, C) leave D as the only unknown.
  const std::vector<double> pd{0.991, 0.086, 1.68, 2.11};
  const auto d = fit_scaling_function(sample(ScalingModel::kF1, pd), ScalingModel::kF1,
                                      {{"A", 0.991}, {"B", 0.086}, {"C", 1.68}});
  CHECK(std::abs(d.value("D") - 2.11) <= 1e-6);

  const auto f2 = fit_scaling_function(sample(ScalingModel::kF2, {1.7}), ScalingModel::kF2, {});
  CHECK(std::abs(f2.value("A") - 1.7) <= 1e-6);

  const std::vector<double> p3{3.0, 0.5, 0.3, 0.5};
  const auto f3 = fit_scaling_function(sample(ScalingModel::kF3, p3), ScalingModel::kF3, {});
  CHECK(f3.rmspe <= 1e-6);

  auto bad = sample(ScalingModel::kF1, p1);
  bad[0].second = 1.2;
  CHECK_THROWS_AS(fit_scaling_function(bad, ScalingModel::kF1, {}), InvalidArgument);
  CHECK_THROWS_AS(fit_scaling_function(sample(ScalingModel::kF1, p1), ScalingModel::kF2,
                                       {{"D", 1.0}}),
                  InvalidArgument);
}

TEST_CASE("rmspe") {
  CHECK(rmspe({0.3, 0.5}, {0.3, 0.5}) == 0.0);
  CHECK(rmspe({1.0}, {0.5}) == 0.5);
  std::vector<double> o{0.2, 0.4, 0.9, 0.5}, f{0.25, 0.35, 0.8, 0.55};
  const double r = rmspe(o, f);
  std::vector<int> idx{0, 1, 2, 3};
  std::mt19937 rng(1);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> o2, f2;
    for (int i : idx) {
      o2.push_back(o[i]);
      f2.push_back(f[i]);
    }
    CHECK(rmspe(o2, f2) == doctest::Approx(r).epsilon(1e-15));
  }
  CHECK_THROWS_AS(rmspe({0.0}, {1.0}), InvalidArgument);
}

TEST_CASE("stretched exponential") {
  std::vector<std::pair<double, double>> pts;
  for (double x = 0.9; x <= 1.12; x += 0.01) {
    pts.push_back({x, stretched_exponential(-0.01, 19.9, x)});
  }
  const auto f = fit_stretched_exponential(pts);
  CHECK(std::abs(f.value("a") + 0.01) <= 1e-6);
  CHECK(std::abs(f.value("b") - 19.9) <= 1e-6);

  const auto d = fit_stretched_exponential({{1.0, 1.0}, {1.0, 1.1}, {1.0, 0.9}});
  CHECK_FALSE(d.converged);
  CHECK_FALSE(d.flags.empty());
}

namespace {

std::vector<CollapseRecord> synthetic_records() {
  // q / q_ref = (L / L_ref)^alpha exactly, two sizes, three seeds.
  std::vector<CollapseRecord> rs;
  for (std::size_t n : {400u, 1024u}) {
    const double l0 = n == 400 ? 50.0 : 128.0;
    for (double beta : {0.0, 0.01, 0.1, 1.0}) {
      const double x = 1.0 / (1.0 + 20 * beta);
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        rs.push_back({"ws", n, beta, seed, l0 * x, 0.3 * std::pow(x, 1.08),
                      50.0 * std::pow(x, 0.9), 0.1 * std::pow(x, -1.76)});
      }
    }
  }
  return rs;
}

}  // namespace

TEST_CASE("collapse construction") {
  const auto rs = synthetic_records();
  const auto c = build_collapse(rs);
  CHECK(c.points.size() == 8);
  CHECK(c.fit_gamma.value("alpha") == doctest::Approx(1.08).epsilon(1e-12));
  CHECK(c.fit_Q.value("alpha") == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(c.fit_P.value("alpha") == doctest::Approx(-1.76).epsilon(1e-12));
  CHECK(c.collapse_score <= 1e-12);
  CHECK(c.raw_score > 0.1);
  for (const auto& p : c.points) {
    if (p.param == 0.0) {
      CHECK(p.x == 1.0);
      CHECK(p.y_gamma == 1.0);
      CHECK(p.y_Q == 1.0);
      CHECK(p.y_P == 1.0);
    }
    CHECK(p.n_seeds == 3);
  }

  // Record order and seed labels do not matter.
  auto shuffled = rs;
  std::mt19937 rng(5);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  for (auto& r : shuffled) r.seed += 100;
  const auto c2 = build_collapse(shuffled);
  CHECK(c2.to_json().dump() == c.to_json().dump());
  CHECK(c2.points_csv() == c.points_csv());

  std::vector<CollapseRecord> only_ref;
  for (const auto& r : rs) {
    if (r.param == 0.0) only_ref.push_back(r);
  }
  const auto c3 = build_collapse(only_ref);
  CHECK_FALSE(c3.exponents_defined);
  for (const auto& p : c3.points) CHECK(p.x == 1.0);

  std::vector<CollapseRecord> no_ref;
  for (const auto& r : rs) {
    if (r.param != 0.0) no_ref.push_back(r);
  }
  CHECK_THROWS_AS(build_collapse(no_ref), InvalidArgument);

  const std::string csv = c.points_csv();
  CHECK(csv.rfind("family,N,param,", 0) == 0);
}

TEST_CASE("scale-free reference selection") {
  std::vector<CollapseRecord> rs;
  for (double lambda : {2.0, 2.5, 3.0, 4.5, 5.0}) {
    rs.push_back({"static_sf", 800, lambda, 1, 4.0 + lambda, 1.0, 2.0, 0.5});
  }
  CollapseOptions o;
  o.reference = ReferenceMode::kScaleFree;
  const auto c = build_collapse(rs, o);
  for (const auto& p : c.points) {
    CHECK(p.ref_param == (p.param <= 3.0 ? 2.0 : 4.5));
  }
  o.curve = MasterCurve::kConstant;
  CHECK(build_collapse(rs, o).fit_gamma.model == "constant");
}
