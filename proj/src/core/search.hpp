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
#include <string>
#include <vector>

#include "core/ctqw.hpp"
#include "core/graph.hpp"
#include "core/metrics.hpp"

namespace qsearch {

enum class GammaMethod { kOverlap, kMinGap, kFixed };

std::string to_string(GammaMethod m);
GammaMethod parse_gamma_method(const std::string& s);

struct SearchOptions {
  GammaMethod method = GammaMethod::kOverlap;
  double fixed_gamma = 0.0;  // used by kFixed
  double gamma_w = 1.0;
  double gamma_min = 1e-4;
  double gamma_max_factor = 10.0;  // scan upper end = factor * k_max
  int scan_points = 200;
  double rel_tol = 1e-6;
  double overlap_tol = 1e-4;
  double dt_divisor = 8.0;  // dt = pi / (dt_divisor * max|E|)
  int fft_periods = 64;
  double min_horizon = 0.0;
  int peak_periods = 50;
  std::size_t max_samples = std::size_t{1} << 25;
  EigenOptions eigen;

  Json to_json() const;
  static SearchOptions from_json(const Json& doc);  // missing keys keep defaults
};

struct ScanPoint {
  double gamma;
  double o0;
  double o1;
  double gap;
};

struct GammaOptimum {
  double gamma = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  std::vector<double> roots;  // overlap method: every refined crossing
  bool flat = false;          // min-gap method: landscape without a minimum
  std::vector<ScanPoint> scan;
};

GammaOptimum optimize_gamma_overlap(const Graph& g, std::size_t target,
                                    const SearchOptions& opts = {});
GammaOptimum optimize_gamma_mingap(const Graph& g, std::size_t target,
                                   const SearchOptions& opts = {});

struct PeriodEstimate {
  double omega_star = 0.0;
  double Q = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  std::size_t samples = 0;
  bool coarsened = false;  // sample cap forced dt above the nominal value
};

PeriodEstimate extract_period(const SpectralDecomposition& sd,
                              const SearchOptions& opts = {});

struct PeakAverage {
  double P = 0.0;
  int windows = 0;
  double max_sampled = 0.0;
  double dt = 0.0;
};

PeakAverage average_peak_probability(const SpectralDecomposition& sd, double Q,
                                     const SearchOptions& opts = {});

struct SearchOutcome {
  std::size_t n = 0;
  std::size_t target = 0;
  double gamma_opt = 0.0;
  GammaMethod method = GammaMethod::kOverlap;
  double o0 = 0.0;
  double o1 = 0.0;
  double gap = 0.0;
  double omega_star = 0.0;
  double Q = 0.0;
  double P = 0.0;
  // Diagnostics.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  bool degenerate = false;
  bool flat_landscape = false;
  bool grid_coarsened = false;
  double horizon = 0.0;
  double dt = 0.0;
  std::size_t samples = 0;
  int windows = 0;
  double first_peak_time = 0.0;  // Q / 2
  double max_sampled_P = 0.0;
  std::vector<double> roots;

  Json to_json() const;
};

SearchOutcome run_search(const Graph& g, const TargetSelector& target,
                         const SearchOptions& opts = {});
SearchOutcome run_search_at(const Graph& g, std::size_t target,
                            const SearchOptions& opts = {});

// Sampled P(t) on the grid extract_period would use.
struct SampledSeries {
  double dt = 0.0;
  std::vector<double> p;
};
SampledSeries sample_probability(const SpectralDecomposition& sd,
                                 double horizon, const SearchOptions& opts);

}  // namespace qsearch
