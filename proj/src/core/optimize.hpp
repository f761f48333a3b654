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

#include <functional>

#include <Eigen/Dense>

namespace qsearch::opt {

using Vec = Eigen::VectorXd;
using Objective = std::function<double(const Vec&)>;
// Writes the residual vector (length fixed per problem) for parameters x.
using ResidualFn = std::function<void(const Vec& x, Vec& r)>;

struct NelderMeadOptions {
  int max_iter = 20000;
  double ftol = 1e-14;  // relative spread of simplex values
  double xtol = 1e-13;  // relative simplex diameter
};

struct MinResult {
  Vec x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

MinResult nelder_mead(const Objective& f, Vec x0, const Vec& step,
                      const NelderMeadOptions& opts = {});

// Argmin of a unimodal f on [a, b].
double golden_section(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_iter = 500);

struct LsqResult {
  Vec x;
  Vec residuals;
  double rss = 0.0;
  bool converged = false;
  Vec stderr_;  // sqrt(diag(s^2 (J^T J)^-1)), s^2 = rss / (m - n)
};

// Levenberg-Marquardt with forward-difference Jacobian (Eigen unsupported).
LsqResult levenberg_marquardt(const ResidualFn& r, int m, const Vec& x0);

// Standard errors from a central-difference Jacobian at x.
Vec standard_errors(const ResidualFn& r, int m, const Vec& x);

}  // namespace qsearch::opt
