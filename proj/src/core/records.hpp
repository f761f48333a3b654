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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/graph.hpp"

namespace qsearch {

// One row of a sweep. Error rows carry `error` and leave the numeric
// fields NaN.
struct SweepRecord {
  std::string key;
  std::string family;
  std::size_t n = 0;            // nodes actually searched
  std::size_t n_requested = 0;  // size class before component extraction
  std::string params;           // "name=value;..." in key order
  double param = 0.0;           // the family's swept parameter
  std::uint64_t seed = 0;
  std::string target_policy;
  std::size_t target_node = 0;
  bool weighted = false;
  double L = 0.0;
  double C = 0.0;
  std::size_t k_min = 0;
  std::size_t k_med = 0;
  std::size_t k_max = 0;
  double gamma_opt = 0.0;
  std::string method;
  double o0 = 0.0;
  double o1 = 0.0;
  double gap = 0.0;
  double omega_star = 0.0;
  double Q = 0.0;
  double P = 0.0;
  double runtime_ms = 0.0;
  std::string version;
  std::string config_hash;
  std::string error;

  bool ok() const { return error.empty(); }
};

// %.17g, with "nan" / "inf" / "-inf" spelled out.
std::string format_double(double v);

std::string records_header();
std::string to_csv_row(const SweepRecord& r);
SweepRecord parse_csv_row(const std::string& line);

std::vector<SweepRecord> read_records(std::istream& in);
std::vector<SweepRecord> read_records_file(const std::string& path);
// Header plus rows, '\n' endings. Written to a sibling temp file and
// renamed into place.
void write_records_file(const std::string& path,
                        const std::vector<SweepRecord>& rows);

// Successful rows as collapse input, sized by n_requested.
std::vector<CollapseRecord> to_collapse_records(
    const std::vector<SweepRecord>& rows, const std::string& family = "");

// Generic fit over sweep rows. model: power | drift | f1 | f2 | f3 |
// stretched. x, y name record columns (n, L, C, param, gamma, Q, P).
// With `average`, y is the ensemble mean per (family, n_requested, param).
struct FitRequest {
  std::string model = "power";
  std::string x = "n";
  std::string y = "gamma";
  std::string family;  // empty: all families
  bool average = true;
  std::map<std::string, double> fixed;  // scaling-function fixed params
};
FitResult fit_records(const std::vector<SweepRecord>& rows,
                      const FitRequest& req);

}  // namespace qsearch
