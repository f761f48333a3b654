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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/graph.hpp"

namespace qsearch {

struct FitParam {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  bool fixed = false;
};

struct FitResult {
  std::string model;
  std::vector<FitParam> params;
  double residual_rms = 0.0;
  double rmspe = 0.0;
  std::size_t n_points = 0;
  bool converged = true;
  std::vector<std::string> flags;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
  Json to_json() const;
};

// y = u x^b by least squares on (log x, log y).
FitResult fit_power_law(const std::vector<double>& xs,
                        const std::vector<double>& ys);

// alpha(N) = p + q N^r. (p, q) solved linearly for each r; r located by a
// bracketing scan, golden-section refinement, then a joint LM polish.
FitResult fit_exponent_drift(const std::vector<double>& Ns,
                             const std::vector<double>& alphas);

enum class ScalingModel { kF1, kF2, kF3 };
std::string to_string(ScalingModel m);
ScalingModel parse_scaling_model(const std::string& s);

// f1 = 1/(A + (D g + B)^C); f2 = A^-g; f3 = tanh(sqrt(g/(g+D))) / (A g^B + C g).
// params are ordered A, B, C, D (f2 uses A only).
double scaling_function(ScalingModel m, const std::vector<double>& params,
                        double gamma);

// Least squares on P. `fixed` pins named parameters (e.g. {"D", 1.0}).
FitResult fit_scaling_function(const std::vector<std::pair<double, double>>& points,
                               ScalingModel model,
                               const std::map<std::string, double>& fixed = {});

// sqrt(mean(((P_j - f_j) / P_j)^2)).
double rmspe(const std::vector<double>& observed,
             const std::vector<double>& fitted);

// y / y_ref = exp(a ((x / x_ref)^b - 1)) by least squares on log y.
FitResult fit_stretched_exponential(const std::vector<std::pair<double, double>>& points,
                                    std::pair<double, double> anchor = {1.0, 1.0});

double stretched_exponential(double a, double b, double x);

// One search result reduced to what the collapse needs.
struct CollapseRecord {
  std::string family;
  std::size_t n = 0;  // size class
  double param = 0.0;  // beta or lambda
  std::uint64_t seed = 0;
  double L = 0.0;
  double gamma = 0.0;
  double Q = 0.0;
  double P = 0.0;
};

enum class ReferenceMode {
  kZero,       // param == 0 (beta = 0)
  kValue,      // param == value
  kScaleFree,  // lambda_0 = 2 for lambda <= 3, 4.5 above
};

enum class MasterCurve { kPower, kStretched, kConstant };

struct CollapseOptions {
  ReferenceMode reference = ReferenceMode::kZero;
  double reference_value = 0.0;
  MasterCurve curve = MasterCurve::kPower;
};

struct CollapsePoint {
  std::string family;
  std::size_t n = 0;
  double param = 0.0;
  double ref_param = 0.0;
  std::size_t n_seeds = 0;
  double L = 0.0, gamma = 0.0, Q = 0.0, P = 0.0;  // ensemble means
  double x = 0.0, y_gamma = 0.0, y_Q = 0.0, y_P = 0.0;
  double stderr_gamma = 0.0, stderr_Q = 0.0, stderr_P = 0.0;  // of y
};

struct CollapseSet {
  std::string reference;
  std::vector<CollapsePoint> points;
  FitResult fit_gamma, fit_Q, fit_P;  // master curves on normalized data
  FitResult raw_gamma, raw_Q, raw_P;  // power laws on unnormalized (L, q)
  double collapse_score = 0.0;  // RMS log residual, all three quantities
  double raw_score = 0.0;
  bool exponents_defined = true;

  Json to_json() const;
  std::string points_csv() const;
};

// Ensemble means per (family, n, param), normalized by the same-(family, n)
// reference mean, then master curves fitted on the pooled points.
CollapseSet build_collapse(const std::vector<CollapseRecord>& records,
                           const CollapseOptions& opts = {});

}  // namespace qsearch
