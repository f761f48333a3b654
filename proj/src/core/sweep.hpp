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
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/records.hpp"
#include "core/search.hpp"

namespace qsearch {

// One cartesian block of a plan. Array-valued entries of `params` are
// expanded; scalars are shared by every job in the block.
struct SweepGroup {
  std::string family;
  Json params = Json::object();
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::string> targets{"min"};
  std::vector<bool> weighted{false};
};

struct SweepPlan {
  std::vector<SweepGroup> groups;
  SearchOptions search;
  std::string output;
  unsigned workers = 0;  // 0: QSEARCH_WORKERS, then hardware concurrency
  bool timing = false;   // wall-clock runtime_ms; off keeps output reproducible

  // {"groups":[{"family":..,"params":{..},"seeds":[..]|{"first":a,"count":c},
  //   "targets":[..],"weighted":[..]}],"search":{..},"output":..,
  //   "workers":..,"timing":..}
  static SweepPlan from_json(const Json& doc);
  Json to_json() const;
};

struct SweepJob {
  std::string key;
  std::string family;
  Json params;
  std::uint64_t seed = 0;
  std::string target;
  bool weighted = false;
};

// Every job of the plan in key order. Throws InvalidArgument on a
// duplicate key.
std::vector<SweepJob> expand_plan(const SweepPlan& plan);

// Pins the software version and every numerical default of the search.
std::string config_hash(const SearchOptions& opts);

// The swept parameter of a family (beta, lambda, p, k, d); 0 when the
// family has none.
double primary_param(const std::string& family, const Json& params);

struct SweepSummary {
  std::size_t jobs = 0;
  std::size_t computed = 0;
  std::size_t skipped = 0;  // reused from a previous run
  std::size_t errors = 0;
  std::string output;
  Json to_json() const;
};

// Runs the pending jobs of `plan` and writes the merged, key-sorted CSV to
// plan.output. Finished rows are journaled to <output>.journal as they
// complete so an interrupted run can resume.
SweepSummary run_sweep(const SweepPlan& plan);

// Single job, no persistence. Failures come back as an error row.
SweepRecord run_job(const SweepJob& job, const SearchOptions& opts,
                    bool timing = false);

unsigned resolve_workers(unsigned requested);

}  // namespace qsearch
