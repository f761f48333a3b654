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

// Command-line front end over the qsearch C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsearch/qsearch.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitPartial = 3;

struct Failure {
  int code;
};

// Maps a library status to an exit code, printing the library message.
void check(qs_status s, const std::string& context) {
  if (s == QS_OK) return;
  std::cerr << "qsearch: " << context << ": " << qs_last_error() << "\n";
  throw Failure{s == QS_ERR_INVALID_ARGUMENT || s == QS_ERR_PARSE ? kExitUsage
                                                                   : kExitNumeric};
}

// Owns a malloc'd string from the library.
struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { qs_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct GraphHandle {
  qs_graph* g = nullptr;
  ~GraphHandle() { qs_graph_free(g); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "qsearch: cannot open " << path << "\n";
    throw Failure{kExitUsage};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "qsearch: cannot write " << path << "\n";
    throw Failure{kExitNumeric};
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Generator flags shared by generate, metrics, and search.
struct GenFlags {
  std::string family;
  std::vector<std::string> raw;  // --param key=value
  std::optional<long long> n, k, stage, m, d, s, nx, ny, max_attempts;
  std::optional<double> beta, p;
  std::optional<std::string> lambda, boundary, variant, mode, connectivity;
  unsigned long long seed = 0;

  void add(CLI::App* app) {
    app->add_option("--family", family, "Graph family (ws, gasket, carpet, ...)");
    app->add_option("--param", raw, "Extra generator parameter key=value");
    app->add_option("--n", n, "Number of nodes");
    app->add_option("--k", k, "Ring degree (ws) or carpet iteration");
    app->add_option("--stage", stage, "Fractal stage");
    app->add_option("--m", m, "Edges per node (static_sf)");
    app->add_option("--d", d, "Hypercube dimension");
    app->add_option("--s", s, "Carpet subdivision");
    app->add_option("--nx", nx, "Lattice width");
    app->add_option("--ny", ny, "Lattice height");
    app->add_option("--max-attempts", max_attempts, "Connectivity retries");
    app->add_option("--beta", beta, "Rewiring probability");
    app->add_option("--p", p, "Edge probability (er)");
    app->add_option("--lambda", lambda, "Degree exponent (static_sf), or inf");
    app->add_option("--boundary", boundary, "open|periodic");
    app->add_option("--variant", variant, "Gasket variant corner|triangle");
    app->add_option("--mode", mode, "Fractal mode rewire|shortcut");
    app->add_option("--connectivity", connectivity,
                    "require|largest_component|allow");
    app->add_option("--seed", seed, "Random seed");
  }

  Json params() const {
    Json j = Json::object();
    auto put = [&](const char* key, const auto& opt) {
      if (opt) j[key] = *opt;
    };
    put("n", n);
    put("k", k);
    put("stage", stage);
    put("m", m);
    put("d", d);
    put("s", s);
    put("nx", nx);
    put("ny", ny);
    put("max_attempts", max_attempts);
    put("beta", beta);
    put("p", p);
    put("boundary", boundary);
    put("variant", variant);
    put("mode", mode);
    put("connectivity", connectivity);
    if (lambda) {
      if (*lambda == "inf") j["lambda"] = "inf";
      else j["lambda"] = std::stod(*lambda);
    }
    for (const auto& kv : raw) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "qsearch: --param expects key=value, got '" << kv << "'\n";
        throw Failure{kExitUsage};
      }
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      try {
        j[key] = Json::parse(val);
      } catch (const Json::exception&) {
        j[key] = val;
      }
    }
    return j;
  }
};

// Loads --graph, or generates from the family flags.
void obtain_graph(const std::string& graph_path, const GenFlags& gen,
                  GraphHandle* out) {
  if (!graph_path.empty()) {
    check(qs_graph_load(graph_path.c_str(), &out->g), "loading " + graph_path);
    return;
  }
  if (gen.family.empty()) {
    std::cerr << "qsearch: give --graph or --family\n";
    throw Failure{kExitUsage};
  }
  const std::string params = gen.params().dump();
  check(qs_graph_generate(gen.family.c_str(), params.c_str(), gen.seed, &out->g),
        "generating " + gen.family + " " + params + " seed " + std::to_string(gen.seed));
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum spatial search on complex networks"};
  app.set_config("--config", "", "Key-value config file; flags take precedence");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qs_version()));

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a canonical graph file");
  GenFlags gen_flags;
  std::string gen_out;
  gen_flags.add(gen_cmd);
  gen_cmd->add_option("--out,-o", gen_out, "Output graph JSON (default stdout)");

  // metrics
  auto* met_cmd = app.add_subcommand("metrics", "Structural metrics of a graph");
  GenFlags met_flags;
  std::string met_graph, met_out;
  unsigned met_workers = 1;
  met_flags.add(met_cmd);
  met_cmd->add_option("--graph,-g", met_graph, "Graph JSON file");
  met_cmd->add_option("--workers", met_workers, "Threads for path lengths");
  met_cmd->add_option("--out,-o", met_out, "Output JSON (default stdout)");

  // search
  auto* s_cmd = app.add_subcommand("search", "Optimal search parameters");
  GenFlags s_flags;
  std::string s_graph, s_out, s_target = "min", s_method, s_options;
  std::optional<double> s_gamma;
  bool s_weighted = false;
  unsigned long long s_weight_seed = 0;
  s_flags.add(s_cmd);
  s_cmd->add_option("--graph,-g", s_graph, "Graph JSON file");
  s_cmd->add_option("--target", s_target, "min|median|max|<node>");
  s_cmd->add_option("--method", s_method, "overlap|mingap|fixed");
  s_cmd->add_option("--gamma", s_gamma, "Hopping rate for --method fixed");
  s_cmd->add_option("--options", s_options, "Search options JSON file");
  s_cmd->add_flag("--weighted", s_weighted, "Search on randomly weighted edges");
  s_cmd->add_option("--weight-seed", s_weight_seed, "Seed for edge weights");
  s_cmd->add_option("--out,-o", s_out, "Output JSON (default stdout)");

  // sweep
  auto* sw_cmd = app.add_subcommand("sweep", "Run a sweep plan into a records CSV");
  std::string sw_plan, sw_out;
  unsigned sw_workers = 0;
  sw_cmd->add_option("--plan", sw_plan, "Plan JSON file")->required();
  sw_cmd->add_option("--out,-o", sw_out, "Records CSV (overrides the plan)");
  sw_cmd->add_option("--workers", sw_workers,
                     "Worker threads (default QSEARCH_WORKERS or all cores)");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model over sweep records");
  std::string fit_records, fit_model = "power", fit_x = "n", fit_y = "gamma",
                           fit_family, fit_out;
  bool fit_no_average = false;
  std::vector<std::string> fit_fix;
  fit_cmd->add_option("--records,-r", fit_records, "Records CSV")->required();
  fit_cmd->add_option("--model", fit_model, "power|drift|f1|f2|f3|stretched");
  fit_cmd->add_option("--x", fit_x, "x column: n, L, C, param, gamma, Q, P");
  fit_cmd->add_option("--y", fit_y, "y column: gamma, Q, P, L, ...");
  fit_cmd->add_option("--family", fit_family, "Restrict to one family");
  fit_cmd->add_flag("--no-average", fit_no_average, "Fit every row, not seed means");
  fit_cmd->add_option("--fix", fit_fix, "Fixed parameter NAME=VALUE");
  fit_cmd->add_option("--out,-o", fit_out, "Output JSON (default stdout)");

  // collapse
  auto* col_cmd = app.add_subcommand("collapse", "Normalized collapse of sweep records");
  std::string col_records, col_reference = "zero", col_curve = "power", col_family,
                           col_out, col_points;
  std::optional<double> col_ref_value;
  col_cmd->add_option("--records,-r", col_records, "Records CSV")->required();
  col_cmd->add_option("--reference", col_reference, "zero|value|scale_free");
  col_cmd->add_option("--reference-value", col_ref_value, "Reference parameter value");
  col_cmd->add_option("--curve", col_curve, "power|stretched|constant");
  col_cmd->add_option("--family", col_family, "Restrict to one family");
  col_cmd->add_option("--out,-o", col_out, "Output JSON (default stdout)");
  col_cmd->add_option("--points", col_points, "Normalized points CSV");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "Run the numerical verification suite");
  std::string ver_check = "all", ver_out;
  std::vector<int> ver_ms;
  ver_cmd->add_option("--check", ver_check,
                      "trotter|kernel|resolvent|neumann|ode|unitarity|laplacian|walks|all");
  ver_cmd->add_option("--M", ver_ms, "Trotter slice counts")->delimiter(',');
  ver_cmd->add_option("--out,-o", ver_out, "Output JSON (default stdout)");

  // ingest
  auto* ing_cmd = app.add_subcommand("ingest", "Read an external edge list");
  std::string ing_input, ing_format = "plain", ing_out;
  ing_cmd->add_option("--input,-i", ing_input, "Edge-list file")->required();
  ing_cmd->add_option("--format", ing_format, "plain|matrix-market-pattern");
  ing_cmd->add_option("--out,-o", ing_out, "Output graph JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      GraphHandle g;
      obtain_graph("", gen_flags, &g);
      OwnedString js;
      check(qs_graph_to_json(g.g, &js.p), "serializing");
      write_output(gen_out, js.str() + "\n");
      std::cerr << "nodes " << qs_graph_node_count(g.g) << " edges "
                << qs_graph_edge_count(g.g) << "\n";
    } else if (met_cmd->parsed()) {
      GraphHandle g;
      obtain_graph(met_graph, met_flags, &g);
      OwnedString js;
      check(qs_metrics(g.g, met_workers, &js.p), "metrics");
      write_output(met_out, js.str());
    } else if (s_cmd->parsed()) {
      GraphHandle g;
      obtain_graph(s_graph, s_flags, &g);
      if (s_weighted) {
        GraphHandle w;
        check(qs_graph_weighted(g.g, s_weight_seed, &w.g), "weighting");
        std::swap(g.g, w.g);
      }
      Json opts = s_options.empty() ? Json::object() : Json::parse(read_file(s_options));
      if (!s_method.empty()) opts["method"] = s_method;
      if (s_gamma) {
        opts["fixed_gamma"] = *s_gamma;
        if (s_method.empty()) opts["method"] = "fixed";
      }
      const std::string opts_text = opts.dump();
      qs_outcome* raw = nullptr;
      check(qs_search(g.g, s_target.c_str(), opts_text.c_str(), &raw), "search");
      std::unique_ptr<qs_outcome, void (*)(qs_outcome*)> o(raw, qs_outcome_free);
      OwnedString js;
      check(qs_outcome_to_json(o.get(), &js.p), "serializing");
      if (s_out.empty()) {
        std::cout << js.str();
      } else {
        write_output(s_out, js.str());
        std::cout << "gamma " << fmt(qs_outcome_gamma(o.get())) << " Q "
                  << fmt(qs_outcome_q(o.get())) << " P " << fmt(qs_outcome_p(o.get()))
                  << "\n";
      }
    } else if (sw_cmd->parsed()) {
      const std::string plan = read_file(sw_plan);
      OwnedString js;
      const qs_status st = qs_sweep(plan.c_str(), sw_out.c_str(), sw_workers, &js.p);
      if (st == QS_ERR_PARTIAL) {
        std::cout << js.str();
        std::cerr << "qsearch: sweep: " << qs_last_error() << "\n";
        return kExitPartial;
      }
      check(st, "sweep");
      std::cout << js.str();
    } else if (fit_cmd->parsed()) {
      Json req{{"model", fit_model}, {"x", fit_x}, {"y", fit_y},
               {"average", !fit_no_average}};
      if (!fit_family.empty()) req["family"] = fit_family;
      if (!fit_fix.empty()) {
        Json fixed = Json::object();
        for (const auto& kv : fit_fix) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) {
            std::cerr << "qsearch: --fix expects NAME=VALUE\n";
            return kExitUsage;
          }
          fixed[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        req["fixed"] = fixed;
      }
      const std::string text = req.dump();
      OwnedString js;
      check(qs_fit_records(fit_records.c_str(), text.c_str(), &js.p), "fit");
      write_output(fit_out, js.str());
    } else if (col_cmd->parsed()) {
      Json opts{{"reference", col_reference}, {"curve", col_curve}};
      if (col_ref_value) opts["reference_value"] = *col_ref_value;
      if (!col_family.empty()) opts["family"] = col_family;
      const std::string text = opts.dump();
      OwnedString js, csv;
      check(qs_collapse(col_records.c_str(), text.c_str(), &js.p, &csv.p), "collapse");
      write_output(col_out, js.str());
      if (!col_points.empty()) write_output(col_points, csv.str());
    } else if (ver_cmd->parsed()) {
      OwnedString js;
      int all_pass = 0;
      check(qs_verify(ver_check.c_str(), ver_ms.empty() ? nullptr : ver_ms.data(),
                      ver_ms.size(), &js.p, &all_pass),
            "verify");
      write_output(ver_out, js.str());
      if (!all_pass) {
        std::cerr << "qsearch: verify: some checks failed\n";
        return kExitNumeric;
      }
    } else if (ing_cmd->parsed()) {
      GraphHandle g;
      check(qs_graph_ingest(ing_input.c_str(), ing_format.c_str(), &g.g),
            "ingesting " + ing_input);
      OwnedString js;
      check(qs_graph_to_json(g.g, &js.p), "serializing");
      write_output(ing_out, js.str() + "\n");
      std::cerr << "nodes " << qs_graph_node_count(g.g) << " edges "
                << qs_graph_edge_count(g.g) << "\n";
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const Json::exception& e) {
    std::cerr << "qsearch: bad JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qsearch: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
