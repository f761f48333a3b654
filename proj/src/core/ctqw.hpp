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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "core/graph.hpp"

namespace qsearch {

// H = gamma (D - A) - gamma_w |w><w|, D the weighted degree matrix.
struct Hamiltonian {
  Eigen::MatrixXd matrix;
  double gamma = 0.0;
  double gamma_w = 1.0;
  std::size_t target = 0;

  std::size_t n() const { return static_cast<std::size_t>(matrix.rows()); }
};

Hamiltonian build_hamiltonian(const Graph& g, double gamma, std::size_t target,
                              double gamma_w = 1.0);

Eigen::MatrixXd laplacian_matrix(const Graph& g);

struct EigenOptions {
  std::size_t max_n = 4096;
};

class SpectralDecomposition {
 public:
  SpectralDecomposition(Eigen::VectorXd energies, Eigen::MatrixXd vectors,
                        std::size_t target);

  std::size_t n() const { return static_cast<std::size_t>(energies_.size()); }
  std::size_t target() const { return target_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  // <E_k|s> and <w|E_k>.
  const Eigen::VectorXd& s_projection() const { return s_proj_; }
  const Eigen::VectorXd& w_projection() const { return w_proj_; }
  // c_k = <w|E_k><E_k|s>; amplitude(t) = sum_k c_k exp(-i E_k t).
  const Eigen::VectorXd& weights() const { return weights_; }

  double max_abs_energy() const;
  // Indices with |c_k| above the pruning threshold, ascending energy.
  const std::vector<std::size_t>& contributing() const { return contributing_; }
  double max_abs_contributing_energy() const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
  std::size_t target_;
  Eigen::VectorXd s_proj_;
  Eigen::VectorXd w_proj_;
  Eigen::VectorXd weights_;
  std::vector<std::size_t> contributing_;
};

SpectralDecomposition eigendecompose(const Hamiltonian& h,
                                     const EigenOptions& opts = {});

struct Overlaps {
  double o0 = 0.0;
  double o1 = 0.0;
  bool degenerate = false;
};

// Levels closer than 1e-12 max|E| are treated as one level. o0 is the weight
// of |s> on the ground level, o1 the weight on the lowest excited level that
// couples to |s> (levels with weight below 1e-16 are skipped; they are
// invisible to the search). A degenerate ground level reports (weight, 0)
// and sets the flag.
Overlaps overlaps(const SpectralDecomposition& sd);

double energy_gap(const SpectralDecomposition& sd);

// E_1' - E_0 with E_1' the lowest excited level coupling to |s>; 0 if none.
double visible_gap(const SpectralDecomposition& sd);

std::complex<double> amplitude(const SpectralDecomposition& sd, double t);

// Full state exp(-iHt)|s> in the node basis.
Eigen::VectorXcd evolve_uniform_state(const SpectralDecomposition& sd, double t);

std::vector<double> probability_series(const SpectralDecomposition& sd,
                                       const std::vector<double>& t_grid);

// P(k dt) for k = 0..count-1 using a phase recurrence over the contributing
// states, resynchronised exactly every `resync` steps.
std::vector<double> probability_series_uniform(const SpectralDecomposition& sd,
                                               double dt, std::size_t count,
                                               std::size_t resync = 1024);

// Lowest two levels of gamma L - gamma_w |w><w| for many gamma from one
// eigendecomposition of L. With L = sum_k lambda_k |phi_k><phi_k| and
// b_k = phi_k(w)^2, eigenvalues carrying weight on w solve
//   f(E) = sum_k b_k / (gamma lambda_k - E) = 1 / gamma_w,
// with one root below 0 and one in (0, gamma lambda_1'), lambda_1' the
// lowest nonzero Laplacian level with b > 0. The uniform state is phi_0, so
//   |<s|E>|^2 = 1 / (N E^2 f'(E)).
class RankOneSpectrum {
 public:
  struct Levels {
    double e0 = 0.0;
    double e1 = 0.0;
    double o0 = 0.0;
    double o1 = 0.0;
  };

  RankOneSpectrum(const Graph& g, std::size_t target, double gamma_w = 1.0,
                  const EigenOptions& opts = {});

  Levels lowest_levels(double gamma) const;

  // Nonzero Laplacian levels with their summed target weights.
  const std::vector<double>& poles() const { return poles_; }
  const std::vector<double>& pole_weights() const { return weights_; }

 private:
  double f(double gamma, double e) const;
  double fprime(double gamma, double e) const;
  double root(double gamma, double lo, double hi) const;

  std::size_t n_;
  double gamma_w_;
  std::vector<double> poles_;
  std::vector<double> weights_;
};

}  // namespace qsearch
