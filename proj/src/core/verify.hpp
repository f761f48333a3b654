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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/ctqw.hpp"
#include "core/graph.hpp"

namespace qsearch {

struct TrotterConfig {
  int M = 1;
  int n_max = 0;
  double t = 0.0;
};

// <w| (exp(-i H_A t/M) exp(-i H_d t/M))^M |s> with H_A = -gamma A and
// H_d = diag(gamma d_i - gamma_w delta_iw). gamma may be 0.
std::complex<double> trotter_amplitude(const Graph& g, double gamma,
                                       std::size_t target, double t, int M,
                                       double gamma_w = 1.0);

// One split-operator slice exp(-i H_A t/M) exp(-i H_d t/M), computed from
// the eigendecomposition of A.
Eigen::MatrixXcd trotter_slice(const Graph& g, double gamma, std::size_t target,
                               double t, int M, double gamma_w = 1.0);

// K_M(i,j) = exp(i Gamma_j t/M) sum_{n<=n_max} (i gamma t/M)^n f_n(i,j) / n!
// with Gamma_j = gamma_w delta_jw - gamma d_j. With enforce_tail_bound the
// call fails unless (gamma t k_max / M)^n_max / n_max! <= 1e-12.
Eigen::MatrixXcd kernel_matrix(const Graph& g, double gamma, std::size_t target,
                               double t, int M, int n_max,
                               double gamma_w = 1.0,
                               bool enforce_tail_bound = true);

double kernel_tail_bound(const Graph& g, double gamma, double t, int M, int n_max);

// <w| K^M |s>.
std::complex<double> compose_kernel(const Eigen::MatrixXcd& kernel, int M,
                                    std::size_t target);

struct Resolvent {
  Eigen::MatrixXcd G;
  double rcond = 0.0;    // reciprocal condition estimate of (omega I - H)
  double residual = 0.0; // max |(omega I - H) G - I|
};

// Requires Im(omega) != 0 or omega off the real spectrum.
Resolvent greens_resolvent(const Hamiltonian& h, std::complex<double> omega);

struct NeumannResult {
  std::vector<std::complex<double>> partial_sums;  // index = n_terms
  std::vector<double> correction_norms;            // |term n| row norms
  double spectral_radius = 0.0;                    // of gamma G0 A
};

// Partial sums of sum_i [sum_n (-gamma G0 A)^n G0]_{wi}, where
// G0 = diag(1 / (omega - gamma d_i + gamma_w delta_iw)). Throws NumericError
// when the spectral radius of gamma G0 A is >= 1.
NeumannResult neumann_kernel(const Graph& g, double gamma, std::size_t target,
                             std::complex<double> omega, int n_terms,
                             double gamma_w = 1.0);

// Classical 4th-order Runge-Kutta on i dpsi/dt = H psi from |s>, fixed step.
std::complex<double> rk4_amplitude(const Hamiltonian& h, double t, int steps);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

// Named checks over the bundled fixtures. `which` selects "trotter",
// "kernel", "resolvent", "neumann", "ode", "unitarity", "laplacian",
// "walks", or "all"; Ms are the Trotter slice counts.
std::vector<CheckResult> run_verification(const std::string& which,
                                          const std::vector<int>& Ms);
Json to_json(const std::vector<CheckResult>& checks);

// Log-log least-squares slope of |trotter - exact| versus M.
double trotter_error_slope(const Graph& g, double gamma, std::size_t target,
                           double t, const std::vector<int>& Ms);

}  // namespace qsearch
