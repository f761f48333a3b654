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

#include "core/verify.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/netgen.hpp"

namespace qsearch {
namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Eigen::VectorXd gamma_diagonal(const Graph& g, double gamma, std::size_t target,
                               double gamma_w) {
  // Gamma_i = gamma_w delta_iw - gamma d_i, so H_d = -diag(Gamma).
  Eigen::VectorXd d(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) d[i] = -gamma * g.weighted_degree(i);
  d[target] += gamma_w;
  return d;
}

void check_trotter_args(const Graph& g, std::size_t target, int M) {
  if (M < 1) throw InvalidArgument("Trotter slice count M must be >= 1");
  if (target >= g.n()) throw InvalidArgument("target out of range");
}

}  // namespace

Eigen::MatrixXcd trotter_slice(const Graph& g, double gamma, std::size_t target,
                               double t, int M, double gamma_w) {
  check_trotter_args(g, target, M);
  const double tau = t / M;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency_matrix(g));
  const Eigen::MatrixXcd u = solver.eigenvectors().cast<cd>();
  Eigen::VectorXcd phase(g.n());
  for (std::size_t k = 0; k < g.n(); ++k) {
    phase[k] = std::exp(kI * gamma * solver.eigenvalues()[k] * tau);
  }
  const Eigen::MatrixXcd ea = u * phase.asDiagonal() * u.adjoint();
  const Eigen::VectorXd gd = gamma_diagonal(g, gamma, target, gamma_w);
  Eigen::VectorXcd ed(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) ed[i] = std::exp(kI * gd[i] * tau);
  return ea * ed.asDiagonal();
}

std::complex<double> trotter_amplitude(const Graph& g, double gamma,
                                       std::size_t target, double t, int M,
                                       double gamma_w) {
  check_trotter_args(g, target, M);
  const double tau = t / M;
  const std::size_t n = g.n();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency_matrix(g));
  const Eigen::MatrixXd& u = solver.eigenvectors();
  Eigen::VectorXcd pa(n), pd(n);
  const Eigen::VectorXd gd = gamma_diagonal(g, gamma, target, gamma_w);
  for (std::size_t k = 0; k < n; ++k) {
    pa[k] = std::exp(kI * gamma * solver.eigenvalues()[k] * tau);
    pd[k] = std::exp(kI * gd[k] * tau);
  }
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Constant(n, cd(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  for (int m = 0; m < M; ++m) {
    psi = pd.cwiseProduct(psi);
    Eigen::VectorXcd c = u.transpose().cast<cd>() * psi;
    psi = u.cast<cd>() * pa.cwiseProduct(c);
  }
  return psi[static_cast<Eigen::Index>(target)];
}

double kernel_tail_bound(const Graph& g, double gamma, double t, int M,
                         int n_max) {
  double kmax = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) kmax = std::max(kmax, g.weighted_degree(i));
  const double x = std::abs(gamma * t * kmax / M);
  // x^n / n! via logs to avoid overflow.
  return std::exp(n_max * std::log(std::max(x, 1e-300)) - std::lgamma(n_max + 1.0));
}

Eigen::MatrixXcd kernel_matrix(const Graph& g, double gamma, std::size_t target,
                               double t, int M, int n_max, double gamma_w,
                               bool enforce_tail_bound) {
  check_trotter_args(g, target, M);
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  if (enforce_tail_bound) {
    const double bound = kernel_tail_bound(g, gamma, t, M, n_max);
    if (bound > 1e-12) {
      throw NumericError("kernel truncation tail bound " + std::to_string(bound) +
                         " exceeds 1e-12 at n_max=" + std::to_string(n_max));
    }
  }
  const double tau = t / M;
  const auto f = walk_counts(g, n_max);
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(g.n(), g.n());
  cd coeff{1.0, 0.0};
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) coeff *= kI * gamma * tau / static_cast<double>(n);
    k += coeff * f[n].cast<cd>();
  }
  const Eigen::VectorXd gd = gamma_diagonal(g, gamma, target, gamma_w);
  for (std::size_t j = 0; j < g.n(); ++j) {
    k.col(static_cast<Eigen::Index>(j)) *= std::exp(kI * gd[j] * tau);
  }
  return k;
}

std::complex<double> compose_kernel(const Eigen::MatrixXcd& kernel, int M,
                                    std::size_t target) {
  const auto n = kernel.rows();
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Constant(n, cd(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  for (int m = 0; m < M; ++m) psi = kernel * psi;
  return psi[static_cast<Eigen::Index>(target)];
}

Resolvent greens_resolvent(const Hamiltonian& h, std::complex<double> omega) {
  const auto n = static_cast<Eigen::Index>(h.n());
  const Eigen::MatrixXcd m =
      omega * Eigen::MatrixXcd::Identity(n, n) - h.matrix.cast<cd>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  Resolvent r;
  r.rcond = lu.rcond();
  if (!(r.rcond > 1e-13)) {
    throw NumericError("resolvent system is singular or ill-conditioned "
                       "(condition estimate " + std::to_string(1.0 / r.rcond) + ")");
  }
  r.G = lu.inverse();
  r.residual = (m * r.G - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  return r;
}

NeumannResult neumann_kernel(const Graph& g, double gamma, std::size_t target,
                             std::complex<double> omega, int n_terms,
                             double gamma_w) {
  if (target >= g.n()) throw InvalidArgument("target out of range");
  if (n_terms < 0) throw InvalidArgument("n_terms must be >= 0");
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::VectorXcd g0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cd denom = omega - gamma * g.weighted_degree(static_cast<std::size_t>(i));
    if (static_cast<std::size_t>(i) == target) denom += gamma_w;
    if (std::abs(denom) == 0.0) throw NumericError("G0 has a pole at this omega");
    g0[i] = 1.0 / denom;
  }
  const Eigen::MatrixXcd ga = gamma * (g0.asDiagonal() * adjacency_matrix(g).cast<cd>());
  NeumannResult out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ga, false);
  out.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(out.spectral_radius < 1.0)) {
    throw NumericError("Neumann series diverges: spectral radius of gamma G0 A is " +
                       std::to_string(out.spectral_radius));
  }
  // Row w of (-gamma G0 A)^n G0, propagated as a row vector.
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(n);
  row[static_cast<Eigen::Index>(target)] = 1.0;
  cd sum = 0.0;
  for (int k = 0; k <= n_terms; ++k) {
    if (k > 0) row = -(row * ga);
    const Eigen::RowVectorXcd term = row.cwiseProduct(g0.transpose());
    sum += term.sum();
    out.partial_sums.push_back(sum);
    out.correction_norms.push_back(term.norm());
  }
  return out;
}

std::complex<double> rk4_amplitude(const Hamiltonian& h, double t, int steps) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  const auto n = static_cast<Eigen::Index>(h.n());
  const Eigen::MatrixXcd mi = -kI * h.matrix.cast<cd>();
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Constant(n, cd(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = mi * psi;
    const Eigen::VectorXcd k2 = mi * (psi + 0.5 * dt * k1);
    const Eigen::VectorXcd k3 = mi * (psi + 0.5 * dt * k2);
    const Eigen::VectorXcd k4 = mi * (psi + dt * k3);
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi[static_cast<Eigen::Index>(h.target)];
}

double trotter_error_slope(const Graph& g, double gamma, std::size_t target,
                           double t, const std::vector<int>& Ms) {
  if (Ms.size() < 2) throw InvalidArgument("slope needs at least two M values");
  const SpectralDecomposition sd =
      eigendecompose(build_hamiltonian(g, gamma, target));
  const cd exact = amplitude(sd, t);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int m : Ms) {
    const double err = std::abs(trotter_amplitude(g, gamma, target, t, m) - exact);
    const double x = std::log(static_cast<double>(m));
    const double y = std::log(std::max(err, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(Ms.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace {

struct Fixture {
  std::string name;
  Graph g;
  double gamma;
  std::size_t target;
};

std::vector<Fixture> fixtures() {
  std::vector<Fixture> f;
  f.push_back({"K4", gen_complete(4), 0.25, 0});
  f.push_back({"P3", Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, "path"), 0.5, 0});
  f.push_back({"C5+chord",
               Graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0},
                         {0, 4, 1.0}, {0, 2, 1.0}}, "custom"),
               0.4, 3});
  f.push_back({"WS(20,4,0.3)", gen_ws(20, 4, 0.3, 1), 0.3, 0});
  f.push_back({"gasket(2)", gen_sierpinski_gasket(2), 0.3, 0});
  f.push_back({"weighted K5", assign_random_weights(gen_complete(5), 3), 0.3, 1});
  return f;
}

void add(std::vector<CheckResult>& out, std::string name, bool pass,
         double measured, double bound) {
  out.push_back({std::move(name), pass, measured, bound});
}

// Number of length-n walks from i to j by explicit enumeration.
void enumerate_walks(const Graph& g, std::size_t start, int max_len,
                     std::vector<Eigen::MatrixXd>& counts) {
  std::vector<std::size_t> path{start};
  auto rec = [&](auto&& self, std::size_t v, int len) -> void {
    counts[len](static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(v)) += 1.0;
    if (len == max_len) return;
    for (std::size_t u = 0; u < g.n(); ++u) {
      if (g.has_edge(v, u)) self(self, u, len + 1);
    }
  };
  rec(rec, start, 0);
}

}  // namespace

std::vector<CheckResult> run_verification(const std::string& which,
                                          const std::vector<int>& Ms) {
  static const std::vector<std::string> kChecks = {
      "trotter", "kernel", "resolvent", "neumann",
      "ode",     "unitarity", "laplacian", "walks"};
  if (which != "all" && std::find(kChecks.begin(), kChecks.end(), which) == kChecks.end()) {
    throw InvalidArgument("unknown check '" + which + "'");
  }
  auto on = [&](const char* c) { return which == "all" || which == c; };
  std::vector<CheckResult> out;
  const auto fx = fixtures();

  if (on("trotter")) {
    for (const auto& f : fx) {
      const double slope = trotter_error_slope(f.g, f.gamma, f.target, 1.0, Ms);
      add(out, "trotter_slope/" + f.name, slope <= -0.8, slope, -0.8);
    }
  }
  if (on("kernel")) {
    for (const auto& f : fx) {
      const int M = 4, n_max = 30;
      const double t = 0.5;
      const auto k = kernel_matrix(f.g, f.gamma, f.target, t, M, n_max);
      const auto slice = trotter_slice(f.g, f.gamma, f.target, t, M);
      const double dev = (k - slice).cwiseAbs().maxCoeff();
      add(out, "kernel_vs_slice/" + f.name, dev <= 1e-12, dev, 1e-12);
      const double comp = std::abs(compose_kernel(k, M, f.target) -
                                   trotter_amplitude(f.g, f.gamma, f.target, t, M));
      add(out, "kernel_composition/" + f.name, comp <= 1e-10, comp, 1e-10);
    }
  }
  if (on("resolvent")) {
    for (const auto& f : fx) {
      const Hamiltonian h = build_hamiltonian(f.g, f.gamma, f.target);
      const double emax = eigendecompose(h).energies().maxCoeff();
      const double real_res = greens_resolvent(h, cd(emax + 1.0, 0.0)).residual;
      add(out, "resolvent_residual_real/" + f.name, real_res <= 1e-8, real_res, 1e-8);
      const double cplx_res = greens_resolvent(h, cd(0.3, 0.5)).residual;
      add(out, "resolvent_residual_complex/" + f.name, cplx_res <= 1e-8, cplx_res, 1e-8);
    }
  }
  if (on("neumann")) {
    for (const auto& f : fx) {
      double kmax = 0.0;
      for (std::size_t i = 0; i < f.g.n(); ++i) kmax = std::max(kmax, f.g.weighted_degree(i));
      const cd omega(4.0 * f.gamma * kmax + 2.0, 0.5);
      const Hamiltonian h = build_hamiltonian(f.g, f.gamma, f.target);
      const auto r = greens_resolvent(h, omega);
      const cd exact = r.G.row(static_cast<Eigen::Index>(f.target)).sum();
      const auto nk = neumann_kernel(f.g, f.gamma, f.target, omega, 200);
      const double dev = std::abs(nk.partial_sums.back() - exact);
      add(out, "neumann_limit/" + f.name, dev <= 1e-10, dev, 1e-10);
    }
  }
  if (on("ode")) {
    for (const auto& f : fx) {
      const Hamiltonian h = build_hamiltonian(f.g, f.gamma, f.target);
      const auto sd = eigendecompose(h);
      const double t = 3.0;
      const double dev = std::abs(rk4_amplitude(h, t, 3000) - amplitude(sd, t));
      add(out, "ode_oracle/" + f.name, dev <= 1e-6, dev, 1e-6);
    }
  }
  if (on("unitarity")) {
    for (const auto& f : fx) {
      const auto sd = eigendecompose(build_hamiltonian(f.g, f.gamma, f.target));
      double worst = 0.0;
      for (double t : {0.0, 0.7, 3.1, 17.0, 250.0, 1e4, 1e6}) {
        worst = std::max(worst, std::abs(evolve_uniform_state(sd, t).squaredNorm() - 1.0));
      }
      add(out, "unitarity/" + f.name, worst <= 1e-10, worst, 1e-10);
    }
  }
  if (on("laplacian")) {
    for (const auto& f : fx) {
      const Hamiltonian h = build_hamiltonian(f.g, f.gamma, f.target, 0.0);
      const double rows = h.matrix.rowwise().sum().cwiseAbs().maxCoeff();
      add(out, "laplacian_row_sums/" + f.name, rows <= 1e-12, rows, 1e-12);
      const double lo = eigendecompose(h).energies().minCoeff();
      add(out, "laplacian_psd/" + f.name, lo >= -1e-10, lo, -1e-10);
    }
  }
  if (on("walks")) {
    // Every labelled graph on 6 nodes, walk lengths up to 4.
    const int nodes = 6, max_len = 4;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 0; i < nodes; ++i)
      for (std::uint32_t j = i + 1; j < nodes; ++j) pairs.push_back({i, j});
    double worst = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        if (mask & (1u << b)) edges.push_back({pairs[b].first, pairs[b].second, 1.0});
      }
      const Graph g(nodes, edges);
      const auto f = walk_counts(g, max_len);
      std::vector<Eigen::MatrixXd> brute(max_len + 1, Eigen::MatrixXd::Zero(nodes, nodes));
      for (int s = 0; s < nodes; ++s) enumerate_walks(g, s, max_len, brute);
      for (int k = 0; k <= max_len; ++k) {
        worst = std::max(worst, (f[k] - brute[k]).cwiseAbs().maxCoeff());
      }
    }
    add(out, "walk_counts_exhaustive/6-node", worst == 0.0, worst, 0.0);
  }
  return out;
}

Json to_json(const std::vector<CheckResult>& checks) {
  Json doc = Json::object();
  for (const auto& c : checks) {
    doc[c.name] = {{"pass", c.pass}, {"measured", c.measured}, {"bound", c.bound}};
  }
  return doc;
}

}  // namespace qsearch
