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

#include "core/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/netgen.hpp"
#include "core/rng.hpp"

namespace qsearch {
namespace {

// Families whose graph ignores the seed.
const std::set<std::string> kDeterministic = {
    "ring", "gasket", "hypercube", "complete", "square", "hex", "carpet"};

std::string params_text(const Json& params) {
  std::string s;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!s.empty()) s += ';';
    s += it.key() + '=' + it.value().dump();
  }
  return s;
}

std::string make_key(const std::string& family, const Json& params,
                     std::uint64_t seed, const std::string& target, bool weighted) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%020" PRIu64, seed);
  return family + '|' + params_text(params) + '|' + buf + '|' + target + '|' +
         (weighted ? "w" : "u");
}

std::string error_text(const std::exception& e) {
  if (auto* q = dynamic_cast<const Error*>(&e)) {
    switch (q->kind()) {
      case ErrorKind::kInvalidArgument: return std::string("invalid: ") + e.what();
      case ErrorKind::kGeneration: return std::string("generation: ") + e.what();
      case ErrorKind::kNumeric: return std::string("numeric: ") + e.what();
      case ErrorKind::kParse: return std::string("parse: ") + e.what();
      case ErrorKind::kIo: return std::string("io: ") + e.what();
    }
  }
  return std::string("error: ") + e.what();
}

std::size_t requested_size(const Json& params, const Graph& g) {
  if (params.contains("n") && params["n"].is_number_unsigned()) {
    return params["n"].get<std::size_t>();
  }
  if (g.metadata().contains("original_n")) {
    return g.metadata()["original_n"].get<std::size_t>();
  }
  return g.n();
}

SweepRecord base_record(const SweepJob& job) {
  SweepRecord r;
  r.key = job.key;
  r.family = job.family;
  r.params = params_text(job.params);
  r.param = primary_param(job.family, job.params);
  r.seed = job.seed;
  r.target_policy = job.target;
  r.weighted = job.weighted;
  r.version = QSEARCH_VERSION;
  if (job.params.contains("n") && job.params["n"].is_number_unsigned()) {
    r.n_requested = job.params["n"].get<std::size_t>();
  }
  return r;
}

void fill_graph(SweepRecord& r, const Graph& g, const GraphMetrics& m) {
  r.n = g.n();
  r.L = m.L;
  r.C = m.C;
  r.k_min = m.degrees.k_min;
  r.k_med = m.degrees.k_med;
  r.k_max = m.degrees.k_max;
}

void fill_outcome(SweepRecord& r, const SearchOutcome& o) {
  r.target_node = o.target;
  r.gamma_opt = o.gamma_opt;
  r.method = to_string(o.method);
  r.o0 = o.o0;
  r.o1 = o.o1;
  r.gap = o.gap;
  r.omega_star = o.omega_star;
  r.Q = o.Q;
  r.P = o.P;
}

std::vector<std::uint64_t> read_seeds(const Json& s) {
  std::vector<std::uint64_t> out;
  if (s.is_array()) {
    for (const auto& v : s) out.push_back(v.get<std::uint64_t>());
  } else if (s.is_object()) {
    const auto first = s.value("first", std::uint64_t{0});
    const auto count = s.at("count").get<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(first + i);
  } else {
    out.push_back(s.get<std::uint64_t>());
  }
  return out;
}

// Expands array-valued params into the cartesian product, in key order.
void expand_params(const Json& params, Json::const_iterator it, Json current,
                   std::vector<Json>* out) {
  if (it == params.end()) {
    out->push_back(std::move(current));
    return;
  }
  auto next = std::next(it);
  if (it.value().is_array()) {
    if (it.value().empty()) return;
    for (const auto& v : it.value()) {
      Json c = current;
      c[it.key()] = v;
      expand_params(params, next, std::move(c), out);
    }
  } else {
    current[it.key()] = it.value();
    expand_params(params, next, std::move(current), out);
  }
}

}  // namespace

double primary_param(const std::string& family, const Json& params) {
  auto get = [&](const char* name) {
    if (!params.contains(name)) return 0.0;
    const Json& v = params[name];
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      return s == "inf" ? std::numeric_limits<double>::infinity() : std::stod(s);
    }
    return v.get<double>();
  };
  if (family == "ws" || family == "ws_shortcut" || family == "fractal_beta") return get("beta");
  if (family == "static_sf") return get("lambda");
  if (family == "er") return get("p");
  if (family == "carpet") return get("k");
  if (family == "hypercube") return get("d");
  return 0.0;
}

SweepPlan SweepPlan::from_json(const Json& doc) {
  if (!doc.is_object()) throw InvalidArgument("sweep plan must be a JSON object");
  SweepPlan p;
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "groups") {
        for (const auto& g : v) {
          SweepGroup sg;
          for (auto gi = g.begin(); gi != g.end(); ++gi) {
            const std::string& gk = gi.key();
            if (gk == "family") sg.family = gi.value().get<std::string>();
            else if (gk == "params") sg.params = gi.value();
            else if (gk == "seeds") sg.seeds = read_seeds(gi.value());
            else if (gk == "targets") {
              sg.targets.clear();
              for (const auto& t : gi.value()) sg.targets.push_back(t.get<std::string>());
            } else if (gk == "weighted") {
              sg.weighted.clear();
              if (gi.value().is_array()) {
                for (const auto& w : gi.value()) sg.weighted.push_back(w.get<bool>());
              } else {
                sg.weighted.push_back(gi.value().get<bool>());
              }
            } else {
              throw InvalidArgument("unknown sweep group key '" + gk + "'");
            }
          }
          if (sg.family.empty()) throw InvalidArgument("sweep group without family");
          if (!sg.params.is_object()) throw InvalidArgument("group params must be an object");
          p.groups.push_back(std::move(sg));
        }
      } else if (k == "search") {
        p.search = SearchOptions::from_json(v);
      } else if (k == "output") {
        p.output = v.get<std::string>();
      } else if (k == "workers") {
        p.workers = v.get<unsigned>();
      } else if (k == "timing") {
        p.timing = v.get<bool>();
      } else {
        throw InvalidArgument("unknown sweep plan key '" + k + "'");
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("bad sweep plan: ") + e.what());
  }
  return p;
}

Json SweepPlan::to_json() const {
  Json gs = Json::array();
  for (const auto& g : groups) {
    Json w = Json::array();
    for (bool b : g.weighted) w.push_back(b);
    gs.push_back({{"family", g.family},
                  {"params", g.params},
                  {"seeds", g.seeds},
                  {"targets", g.targets},
                  {"weighted", w}});
  }
  return Json{{"groups", gs},
              {"search", search.to_json()},
              {"output", output},
              {"workers", workers},
              {"timing", timing}};
}

std::vector<SweepJob> expand_plan(const SweepPlan& plan) {
  std::vector<SweepJob> jobs;
  for (const auto& g : plan.groups) {
    std::vector<Json> combos;
    expand_params(g.params, g.params.begin(), Json::object(), &combos);
    for (const auto& params : combos) {
      for (auto seed : g.seeds) {
        for (const auto& t : g.targets) {
          TargetSelector::parse(t);  // validate early
          for (bool w : g.weighted) {
            jobs.push_back({make_key(g.family, params, seed, t, w), g.family,
                            params, seed, t, w});
          }
        }
      }
    }
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const SweepJob& a, const SweepJob& b) { return a.key < b.key; });
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    if (jobs[i].key == jobs[i - 1].key) {
      throw InvalidArgument("duplicate sweep job " + jobs[i].key);
    }
  }
  return jobs;
}

std::string config_hash(const SearchOptions& opts) {
  std::uint64_t h = fnv1a(QSEARCH_VERSION);
  h = fnv1a("|", h);
  h = fnv1a(opts.to_json().dump(), h);
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QSEARCH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Json SweepSummary::to_json() const {
  return Json{{"jobs", jobs},
              {"computed", computed},
              {"skipped", skipped},
              {"errors", errors},
              {"output", output}};
}

namespace {

// Jobs sharing one generated graph; deterministic families also share it
// across seeds.
struct Unit {
  std::string family;
  Json params;
  std::uint64_t seed = 0;
  std::vector<const SweepJob*> jobs;
};

std::vector<SweepRecord> run_unit(const Unit& u, const SearchOptions& opts,
                                  const std::string& hash, bool timing) {
  using clock = std::chrono::steady_clock;
  std::vector<SweepRecord> out;
  std::optional<Graph> graph;
  std::optional<GraphMetrics> metrics;
  std::string graph_error;
  try {
    graph = generate(u.family, u.params, u.seed);
    metrics = compute_metrics(*graph);
  } catch (const std::exception& e) {
    graph_error = error_text(e);
  }
  // Searches on a shared unweighted graph repeat across seeds of a
  // deterministic family.
  std::map<std::string, SearchOutcome> memo;
  for (const SweepJob* job : u.jobs) {
    SweepRecord r = base_record(*job);
    r.config_hash = hash;
    if (!graph_error.empty()) {
      r.error = graph_error;
      out.push_back(std::move(r));
      continue;
    }
    fill_graph(r, *graph, *metrics);
    r.n_requested = requested_size(job->params, *graph);
    try {
      const auto start = clock::now();
      SearchOutcome o;
      if (job->weighted) {
        o = run_search(assign_random_weights(*graph, job->seed),
                       TargetSelector::parse(job->target), opts);
      } else {
        auto it = memo.find(job->target);
        if (it == memo.end()) {
          o = run_search(*graph, TargetSelector::parse(job->target), opts);
          it = memo.emplace(job->target, o).first;
        }
        o = it->second;
      }
      fill_outcome(r, o);
      if (timing) {
        r.runtime_ms =
            std::chrono::duration<double, std::milli>(clock::now() - start).count();
      }
    } catch (const std::exception& e) {
      r.error = error_text(e);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

SweepRecord run_job(const SweepJob& job, const SearchOptions& opts, bool timing) {
  Unit u{job.family, job.params, job.seed, {&job}};
  return run_unit(u, opts, config_hash(opts), timing).front();
}

SweepSummary run_sweep(const SweepPlan& plan) {
  if (plan.output.empty()) throw InvalidArgument("sweep plan has no output path");
  const auto jobs = expand_plan(plan);
  const std::string hash = config_hash(plan.search);
  const std::string journal = plan.output + ".journal";

  // Reuse rows from a previous run with the same configuration.
  std::map<std::string, SweepRecord> done;
  auto absorb = [&](const std::string& path, bool tolerate_tail) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line) || line != records_header()) return;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        SweepRecord r = parse_csv_row(line);
        if (r.ok() && r.config_hash == hash) done[r.key] = std::move(r);
      } catch (const ParseError&) {
        if (!tolerate_tail) throw;  // a torn last journal line is expected
      }
    }
  };
  absorb(plan.output, false);
  absorb(journal, true);

  std::set<std::string> wanted;
  for (const auto& j : jobs) wanted.insert(j.key);
  for (auto it = done.begin(); it != done.end();) {
    it = wanted.count(it->first) ? std::next(it) : done.erase(it);
  }

  std::map<std::string, Unit> units;
  for (const auto& j : jobs) {
    if (done.count(j.key)) continue;
    const bool det = kDeterministic.count(j.family) != 0;
    const std::string ukey = j.family + '|' + params_text(j.params) + '|' +
                             (det ? std::string("-") : std::to_string(j.seed));
    Unit& u = units[ukey];
    if (u.jobs.empty()) {
      u.family = j.family;
      u.params = j.params;
      u.seed = j.seed;
    }
    u.jobs.push_back(&j);
  }
  std::vector<Unit*> work;
  for (auto& [k, u] : units) work.push_back(&u);

  SweepSummary summary;
  summary.jobs = jobs.size();
  summary.skipped = done.size();
  summary.output = plan.output;

  // The journal starts with a fresh header holding the rows we already have.
  {
    std::ofstream j(journal, std::ios::binary | std::ios::trunc);
    if (!j) throw IoError("cannot write " + journal);
    j << records_header() << '\n';
    for (const auto& [k, r] : done) j << to_csv_row(r) << '\n';
  }
  std::ofstream jout(journal, std::ios::binary | std::ios::app);
  std::mutex mu;
  std::map<std::string, SweepRecord> fresh;
  std::atomic<std::size_t> next{0};
  const unsigned nworkers =
      std::min<unsigned>(resolve_workers(plan.workers),
                         static_cast<unsigned>(std::max<std::size_t>(work.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < nworkers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= work.size()) return;
          auto rows = run_unit(*work[i], plan.search, hash, plan.timing);
          std::lock_guard lock(mu);
          for (auto& r : rows) {
            jout << to_csv_row(r) << '\n';
            fresh[r.key] = std::move(r);
          }
          jout.flush();
        }
      });
    }
  }
  jout.close();

  std::vector<SweepRecord> rows;
  rows.reserve(jobs.size());
  for (const auto& j : jobs) {
    auto it = done.find(j.key);
    if (it != done.end()) {
      rows.push_back(it->second);
      continue;
    }
    SweepRecord& r = fresh.at(j.key);
    ++summary.computed;
    if (!r.ok()) ++summary.errors;
    rows.push_back(std::move(r));
  }
  write_records_file(plan.output, rows);
  std::error_code ec;
  std::filesystem::remove(journal, ec);
  return summary;
}

}  // namespace qsearch
