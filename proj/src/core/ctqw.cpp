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

#include "core/ctqw.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace qsearch {
namespace {

constexpr double kPruneWeight = 1e-15;
constexpr double kDegenerateRel = 1e-12;
// Levels with less weight on |s> are treated as decoupled from the search.
constexpr double kDarkWeight = 1e-16;

}  // namespace

Eigen::MatrixXd laplacian_matrix(const Graph& g) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    l(e.u, e.v) -= e.w;
    l(e.v, e.u) -= e.w;
    l(e.u, e.u) += e.w;
    l(e.v, e.v) += e.w;
  }
  return l;
}

Hamiltonian build_hamiltonian(const Graph& g, double gamma, std::size_t target,
                              double gamma_w) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(gamma_w >= 0.0)) throw InvalidArgument("gamma_w must be non-negative");
  if (target >= g.n()) throw InvalidArgument("target out of range");
  Hamiltonian h;
  h.gamma = gamma;
  h.gamma_w = gamma_w;
  h.target = target;
  h.matrix = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const Edge& e : g.edges()) {
    const double v = gamma * e.w;
    h.matrix(e.u, e.v) = -v;
    h.matrix(e.v, e.u) = -v;
  }
  for (std::size_t i = 0; i < g.n(); ++i) {
    h.matrix(i, i) = gamma * g.weighted_degree(i);
  }
  h.matrix(target, target) -= gamma_w;
  return h;
}

SpectralDecomposition::SpectralDecomposition(Eigen::VectorXd energies,
                                             Eigen::MatrixXd vectors,
                                             std::size_t target)
    : energies_(std::move(energies)),
      vectors_(std::move(vectors)),
      target_(target) {
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n()));
  s_proj_ = vectors_.colwise().sum().transpose() * inv_sqrt_n;
  w_proj_ = vectors_.row(static_cast<Eigen::Index>(target_)).transpose();
  weights_ = s_proj_.cwiseProduct(w_proj_);
  for (std::size_t k = 0; k < n(); ++k) {
    if (std::abs(weights_[k]) > kPruneWeight) contributing_.push_back(k);
  }
}

double SpectralDecomposition::max_abs_energy() const {
  return energies_.cwiseAbs().maxCoeff();
}

double SpectralDecomposition::max_abs_contributing_energy() const {
  double m = 0.0;
  for (std::size_t k : contributing_) m = std::max(m, std::abs(energies_[k]));
  return m;
}

SpectralDecomposition eigendecompose(const Hamiltonian& h,
                                     const EigenOptions& opts) {
  if (h.n() > opts.max_n) {
    throw InvalidArgument("eigendecomposition size " + std::to_string(h.n()) +
                          " exceeds the cap " + std::to_string(opts.max_n));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigensolver did not converge");
  }
  return SpectralDecomposition(solver.eigenvalues(), solver.eigenvectors(),
                               h.target);
}

namespace {

// Weight of |s> on each level, levels grouped within the degeneracy
// tolerance. Returns (first index, size, weight) triples.
struct Level {
  std::size_t first;
  std::size_t size;
  double weight;
};

std::vector<Level> levels(const SpectralDecomposition& sd, std::size_t limit) {
  const auto& e = sd.energies();
  const auto& s = sd.s_projection();
  const double tol = kDegenerateRel * sd.max_abs_energy();
  std::vector<Level> out;
  for (std::size_t k = 0; k < sd.n() && out.size() < limit;) {
    Level lv{k, 0, 0.0};
    while (k < sd.n() && e[k] - e[lv.first] <= tol) {
      lv.weight += s[k] * s[k];
      ++lv.size;
      ++k;
    }
    out.push_back(lv);
  }
  return out;
}

}  // namespace

Overlaps overlaps(const SpectralDecomposition& sd) {
  Overlaps o;
  const auto& e = sd.energies();
  const auto& s = sd.s_projection();
  const double tol = kDegenerateRel * sd.max_abs_energy();
  std::size_t k = 0;
  while (k < sd.n() && e[k] - e[0] <= tol) {
    o.o0 += s[k] * s[k];
    ++k;
  }
  if (k > 1) {
    o.degenerate = true;
    return o;
  }
  for (const Level& lv : levels(sd, sd.n())) {
    if (lv.first == 0) continue;
    if (lv.weight > kDarkWeight) {
      o.o1 = lv.weight;
      break;
    }
  }
  return o;
}

double energy_gap(const SpectralDecomposition& sd) {
  if (sd.n() < 2) return 0.0;
  return sd.energies()[1] - sd.energies()[0];
}

double visible_gap(const SpectralDecomposition& sd) {
  const auto lv = levels(sd, sd.n());
  for (std::size_t i = 1; i < lv.size(); ++i) {
    if (lv[i].weight > kDarkWeight) {
      return sd.energies()[lv[i].first] - sd.energies()[0];
    }
  }
  return 0.0;
}

std::complex<double> amplitude(const SpectralDecomposition& sd, double t) {
  double re = 0.0, im = 0.0;
  for (std::size_t k : sd.contributing()) {
    const double phase = sd.energies()[k] * t;
    re += sd.weights()[k] * std::cos(phase);
    im -= sd.weights()[k] * std::sin(phase);
  }
  return {re, im};
}

Eigen::VectorXcd evolve_uniform_state(const SpectralDecomposition& sd,
                                      double t) {
  Eigen::VectorXcd coeff(sd.n());
  for (std::size_t k = 0; k < sd.n(); ++k) {
    coeff[k] = sd.s_projection()[k] *
               std::polar(1.0, -sd.energies()[k] * t);
  }
  return sd.vectors().cast<std::complex<double>>() * coeff;
}

std::vector<double> probability_series(const SpectralDecomposition& sd,
                                       const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw InvalidArgument("time grid must be non-negative and strictly increasing");
    }
  }
  std::vector<double> p(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) p[i] = std::norm(amplitude(sd, t_grid[i]));
  return p;
}

std::vector<double> probability_series_uniform(const SpectralDecomposition& sd,
                                               double dt, std::size_t count,
                                               std::size_t resync) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (resync == 0) resync = 1;
  const auto& idx = sd.contributing();
  const std::size_t m = idx.size();
  std::vector<double> c(m), energy(m), rr(m), ri(m), zr(m), zi(m);
  for (std::size_t j = 0; j < m; ++j) {
    c[j] = sd.weights()[idx[j]];
    energy[j] = sd.energies()[idx[j]];
    rr[j] = std::cos(energy[j] * dt);
    ri[j] = -std::sin(energy[j] * dt);
  }
  std::vector<double> p(count);
  for (std::size_t step = 0; step < count; ++step) {
    if (step % resync == 0) {
      const double t = static_cast<double>(step) * dt;
      for (std::size_t j = 0; j < m; ++j) {
        zr[j] = c[j] * std::cos(energy[j] * t);
        zi[j] = -c[j] * std::sin(energy[j] * t);
      }
    }
    double ar[4] = {0, 0, 0, 0}, ai[4] = {0, 0, 0, 0};
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
      for (int l = 0; l < 4; ++l) {
        const double xr = zr[j + l], xi = zi[j + l];
        ar[l] += xr;
        ai[l] += xi;
        zr[j + l] = xr * rr[j + l] - xi * ri[j + l];
        zi[j + l] = xr * ri[j + l] + xi * rr[j + l];
      }
    }
    for (; j < m; ++j) {
      const double xr = zr[j], xi = zi[j];
      ar[0] += xr;
      ai[0] += xi;
      zr[j] = xr * rr[j] - xi * ri[j];
      zi[j] = xr * ri[j] + xi * rr[j];
    }
    const double re = (ar[0] + ar[1]) + (ar[2] + ar[3]);
    const double im = (ai[0] + ai[1]) + (ai[2] + ai[3]);
    p[step] = re * re + im * im;
  }
  return p;
}

RankOneSpectrum::RankOneSpectrum(const Graph& g, std::size_t target,
                                 double gamma_w, const EigenOptions& opts)
    : n_(g.n()), gamma_w_(gamma_w) {
  if (target >= g.n()) throw InvalidArgument("target out of range");
  if (!(gamma_w > 0.0)) throw InvalidArgument("gamma_w must be positive");
  if (g.n() < 2) throw InvalidArgument("search needs n >= 2");
  if (g.n() > opts.max_n) {
    throw InvalidArgument("eigendecomposition size " + std::to_string(g.n()) +
                          " exceeds the cap " + std::to_string(opts.max_n));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_matrix(g));
  if (solver.info() != Eigen::Success) {
    throw NumericError("Laplacian eigensolver did not converge");
  }
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const Eigen::MatrixXd& vec = solver.eigenvectors();
  const double scale = std::max(1.0, lam[lam.size() - 1]);
  if (lam[1] <= 1e-10 * scale) {
    throw NumericError("graph is disconnected (Laplacian has a repeated zero eigenvalue)");
  }
  // Group numerically degenerate levels; only their total weight on w is
  // basis independent.
  const double tol = 1e-11 * scale;
  for (Eigen::Index k = 1; k < lam.size();) {
    Eigen::Index end = k;
    double weight = 0.0, sum = 0.0;
    while (end < lam.size() && lam[end] - lam[k] <= tol) {
      const double x = vec(static_cast<Eigen::Index>(target), end);
      weight += x * x;
      sum += lam[end];
      ++end;
    }
    if (weight > 1e-20) {
      poles_.push_back(sum / static_cast<double>(end - k));
      weights_.push_back(weight);
    }
    k = end;
  }
  if (poles_.empty()) throw NumericError("target decouples from the Laplacian spectrum");
}

double RankOneSpectrum::f(double gamma, double e) const {
  double sum = (1.0 / static_cast<double>(n_)) / (-e);
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    sum += weights_[j] / (gamma * poles_[j] - e);
  }
  return sum;
}

double RankOneSpectrum::fprime(double gamma, double e) const {
  double sum = (1.0 / static_cast<double>(n_)) / (e * e);
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const double d = gamma * poles_[j] - e;
    sum += weights_[j] / (d * d);
  }
  return sum;
}

double RankOneSpectrum::root(double gamma, double lo, double hi) const {
  const double target = 1.0 / gamma_w_;
  // f is increasing on (lo, hi); bisect until the bracket stops shrinking.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(gamma, mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

RankOneSpectrum::Levels RankOneSpectrum::lowest_levels(double gamma) const {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  Levels lv;
  lv.e0 = root(gamma, -gamma_w_, 0.0);
  lv.e1 = root(gamma, 0.0, gamma * poles_.front());
  const double inv_n = 1.0 / static_cast<double>(n_);
  lv.o0 = inv_n / (lv.e0 * lv.e0 * fprime(gamma, lv.e0));
  lv.o1 = inv_n / (lv.e1 * lv.e1 * fprime(gamma, lv.e1));
  return lv;
}

}  // namespace qsearch
