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

#include "qsearch/qsearch.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "core/analysis.hpp"
#include "core/ctqw.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/netgen.hpp"
#include "core/records.hpp"
#include "core/search.hpp"
#include "core/sweep.hpp"
#include "core/verify.hpp"

struct qs_graph {
  qsearch::Graph g;
};

struct qs_outcome {
  qsearch::SearchOutcome o;
};

namespace {

thread_local std::string g_last_error;

qs_status status_of(qsearch::ErrorKind k) {
  switch (k) {
    case qsearch::ErrorKind::kInvalidArgument: return QS_ERR_INVALID_ARGUMENT;
    case qsearch::ErrorKind::kGeneration: return QS_ERR_GENERATION;
    case qsearch::ErrorKind::kNumeric: return QS_ERR_NUMERIC;
    case qsearch::ErrorKind::kParse: return QS_ERR_PARSE;
    case qsearch::ErrorKind::kIo: return QS_ERR_IO;
  }
  return QS_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <class F>
qs_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const qsearch::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("json: ") + e.what();
    return QS_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QS_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(bool cond, const char* what) {
  if (!cond) throw qsearch::InvalidArgument(what);
}

qsearch::Json parse_json(const char* text, const char* what) {
  if (!text || !*text) return qsearch::Json::object();
  try {
    return qsearch::Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw qsearch::ParseError(std::string(what) + ": " + e.what());
  }
}

// Fixed-precision dump so identical results give identical bytes.
std::string dump(const qsearch::Json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* qs_version(void) { return QSEARCH_VERSION; }

const char* qs_last_error(void) { return g_last_error.c_str(); }

void qs_string_free(char* s) { std::free(s); }

qs_status qs_graph_generate(const char* family, const char* params_json,
                            uint64_t seed, qs_graph** out) {
  return guarded([&] {
    require(family && out, "family and out must not be NULL");
    *out = new qs_graph{qsearch::generate(family, parse_json(params_json, "params"), seed)};
    return QS_OK;
  });
}

qs_status qs_graph_from_json(const char* json, qs_graph** out) {
  return guarded([&] {
    require(json && out, "json and out must not be NULL");
    *out = new qs_graph{qsearch::Graph::from_json(parse_json(json, "graph"))};
    return QS_OK;
  });
}

qs_status qs_graph_load(const char* path, qs_graph** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qsearch::IoError(std::string("cannot open ") + path);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = new qs_graph{qsearch::Graph::from_json(parse_json(ss.str().c_str(), path))};
    return QS_OK;
  });
}

qs_status qs_graph_ingest(const char* path, const char* format, qs_graph** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    const auto fmt = qsearch::parse_edge_list_format(format ? format : "plain");
    *out = new qs_graph{qsearch::ingest_edge_list(path, fmt)};
    return QS_OK;
  });
}

qs_status qs_graph_save(const qs_graph* g, const char* path) {
  return guarded([&] {
    require(g && path, "graph and path must not be NULL");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qsearch::IoError(std::string("cannot write ") + path);
    out << g->g.to_json().dump() << '\n';
    if (!out) throw qsearch::IoError(std::string("write failed for ") + path);
    return QS_OK;
  });
}

qs_status qs_graph_to_json(const qs_graph* g, char** json_out) {
  return guarded([&] {
    require(g && json_out, "graph and json_out must not be NULL");
    *json_out = dup_string(g->g.to_json().dump());
    return QS_OK;
  });
}

qs_status qs_graph_weighted(const qs_graph* g, uint64_t seed, qs_graph** out) {
  return guarded([&] {
    require(g && out, "graph and out must not be NULL");
    *out = new qs_graph{qsearch::assign_random_weights(g->g, seed)};
    return QS_OK;
  });
}

size_t qs_graph_node_count(const qs_graph* g) { return g ? g->g.n() : 0; }
size_t qs_graph_edge_count(const qs_graph* g) { return g ? g->g.edge_count() : 0; }
void qs_graph_free(qs_graph* g) { delete g; }

qs_status qs_metrics(const qs_graph* g, unsigned workers, char** json_out) {
  return guarded([&] {
    require(g && json_out, "graph and json_out must not be NULL");
    const auto m = qsearch::compute_metrics(g->g, workers == 0 ? 1 : workers);
    *json_out = dup_string(dump(qsearch::to_json(m)));
    return QS_OK;
  });
}

qs_status qs_search(const qs_graph* g, const char* target,
                    const char* options_json, qs_outcome** out) {
  return guarded([&] {
    require(g && out, "graph and out must not be NULL");
    const auto sel = qsearch::TargetSelector::parse(target ? target : "min");
    const auto opts =
        qsearch::SearchOptions::from_json(parse_json(options_json, "search options"));
    *out = new qs_outcome{qsearch::run_search(g->g, sel, opts)};
    return QS_OK;
  });
}

double qs_outcome_gamma(const qs_outcome* o) { return o ? o->o.gamma_opt : 0.0; }
double qs_outcome_q(const qs_outcome* o) { return o ? o->o.Q : 0.0; }
double qs_outcome_p(const qs_outcome* o) { return o ? o->o.P : 0.0; }
size_t qs_outcome_target(const qs_outcome* o) { return o ? o->o.target : 0; }

qs_status qs_outcome_to_json(const qs_outcome* o, char** json_out) {
  return guarded([&] {
    require(o && json_out, "outcome and json_out must not be NULL");
    *json_out = dup_string(dump(o->o.to_json()));
    return QS_OK;
  });
}

void qs_outcome_free(qs_outcome* o) { delete o; }

qs_status qs_probability_series(const qs_graph* g, double gamma, size_t target,
                                double dt, size_t count, double* out) {
  return guarded([&] {
    require(g && (out || count == 0), "graph and out must not be NULL");
    require(dt > 0.0, "dt must be positive");
    const auto h = qsearch::build_hamiltonian(g->g, gamma, target);
    const auto sd = qsearch::eigendecompose(h);
    const auto p = qsearch::probability_series_uniform(sd, dt, count);
    std::copy(p.begin(), p.end(), out);
    return QS_OK;
  });
}

qs_status qs_sweep(const char* plan_json, const char* output, unsigned workers,
                   char** summary_json) {
  return guarded([&] {
    require(plan_json, "plan must not be NULL");
    auto plan = qsearch::SweepPlan::from_json(parse_json(plan_json, "plan"));
    if (output && *output) plan.output = output;
    if (workers > 0) plan.workers = workers;
    const auto summary = qsearch::run_sweep(plan);
    if (summary_json) *summary_json = dup_string(dump(summary.to_json()));
    if (summary.errors > 0) {
      g_last_error = std::to_string(summary.errors) + " sweep job(s) failed";
      return QS_ERR_PARTIAL;
    }
    return QS_OK;
  });
}

namespace {

std::map<std::string, double> read_fixed(const qsearch::Json& j) {
  std::map<std::string, double> fixed;
  if (j.is_null()) return fixed;
  if (!j.is_object()) throw qsearch::InvalidArgument("fixed must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) fixed[it.key()] = it.value().get<double>();
  return fixed;
}

}  // namespace

qs_status qs_fit_records(const char* records_path, const char* request_json,
                         char** json_out) {
  return guarded([&] {
    require(records_path && json_out, "records_path and json_out must not be NULL");
    const auto req_doc = parse_json(request_json, "fit request");
    qsearch::FitRequest req;
    for (auto it = req_doc.begin(); it != req_doc.end(); ++it) {
      const std::string& k = it.key();
      if (k == "model") req.model = it.value().get<std::string>();
      else if (k == "x") req.x = it.value().get<std::string>();
      else if (k == "y") req.y = it.value().get<std::string>();
      else if (k == "family") req.family = it.value().get<std::string>();
      else if (k == "average") req.average = it.value().get<bool>();
      else if (k == "fixed") req.fixed = read_fixed(it.value());
      else throw qsearch::InvalidArgument("unknown fit request key '" + k + "'");
    }
    const auto rows = qsearch::read_records_file(records_path);
    *json_out = dup_string(dump(qsearch::fit_records(rows, req).to_json()));
    return QS_OK;
  });
}

qs_status qs_fit_points(const char* model, const double* x, const double* y,
                        size_t n, const char* fixed_json, char** json_out) {
  return guarded([&] {
    require(model && json_out && ((x && y) || n == 0), "NULL argument");
    const std::vector<double> xs(x, x + n), ys(y, y + n);
    const std::string m = model;
    qsearch::FitResult r;
    if (m == "power") {
      r = qsearch::fit_power_law(xs, ys);
    } else if (m == "drift") {
      r = qsearch::fit_exponent_drift(xs, ys);
    } else {
      std::vector<std::pair<double, double>> pts;
      for (size_t i = 0; i < n; ++i) pts.push_back({xs[i], ys[i]});
      if (m == "stretched") {
        r = qsearch::fit_stretched_exponential(pts);
      } else {
        r = qsearch::fit_scaling_function(pts, qsearch::parse_scaling_model(m),
                                          read_fixed(parse_json(fixed_json, "fixed")));
      }
    }
    *json_out = dup_string(dump(r.to_json()));
    return QS_OK;
  });
}

qs_status qs_collapse(const char* records_path, const char* options_json,
                      char** json_out, char** csv_out) {
  return guarded([&] {
    require(records_path && json_out, "records_path and json_out must not be NULL");
    const auto doc = parse_json(options_json, "collapse options");
    qsearch::CollapseOptions opts;
    std::string family;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const qsearch::Json& v = it.value();
      if (k == "family") {
        family = v.get<std::string>();
      } else if (k == "reference") {
        const auto s = v.get<std::string>();
        if (s == "zero") opts.reference = qsearch::ReferenceMode::kZero;
        else if (s == "value") opts.reference = qsearch::ReferenceMode::kValue;
        else if (s == "scale_free") opts.reference = qsearch::ReferenceMode::kScaleFree;
        else throw qsearch::InvalidArgument("reference must be zero|value|scale_free");
      } else if (k == "reference_value") {
        opts.reference_value = v.get<double>();
        opts.reference = qsearch::ReferenceMode::kValue;
      } else if (k == "curve") {
        const auto s = v.get<std::string>();
        if (s == "power") opts.curve = qsearch::MasterCurve::kPower;
        else if (s == "stretched") opts.curve = qsearch::MasterCurve::kStretched;
        else if (s == "constant") opts.curve = qsearch::MasterCurve::kConstant;
        else throw qsearch::InvalidArgument("curve must be power|stretched|constant");
      } else {
        throw qsearch::InvalidArgument("unknown collapse option '" + k + "'");
      }
    }
    const auto rows = qsearch::read_records_file(records_path);
    const auto set = qsearch::build_collapse(qsearch::to_collapse_records(rows, family), opts);
    *json_out = dup_string(dump(set.to_json()));
    if (csv_out) *csv_out = dup_string(set.points_csv());
    return QS_OK;
  });
}

qs_status qs_verify(const char* which, const int* Ms, size_t n_ms,
                    char** json_out, int* all_pass) {
  return guarded([&] {
    require(json_out, "json_out must not be NULL");
    std::vector<int> ms = Ms && n_ms ? std::vector<int>(Ms, Ms + n_ms)
                                     : std::vector<int>{8, 16, 32, 64, 128, 256, 512, 1024};
    const auto checks = qsearch::run_verification(which ? which : "all", ms);
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass;
    if (all_pass) *all_pass = ok ? 1 : 0;
    *json_out = dup_string(dump(qsearch::to_json(checks)));
    return QS_OK;
  });
}

}  // extern "C"
