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

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qsearch/qsearch.h"

using Json = nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  qs_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("graph handles") {
  qs_graph* g = nullptr;
  REQUIRE(qs_graph_generate("ws", R"({"n":400,"k":4,"beta":0.2})", 1, &g) == QS_OK);
  CHECK(qs_graph_node_count(g) == 400);
  CHECK(qs_graph_edge_count(g) == 800);
  char* js = nullptr;
  REQUIRE(qs_graph_to_json(g, &js) == QS_OK);
  const std::string text = take(js);
  qs_graph* h = nullptr;
  REQUIRE(qs_graph_from_json(text.c_str(), &h) == QS_OK);
  char* js2 = nullptr;
  REQUIRE(qs_graph_to_json(h, &js2) == QS_OK);
  CHECK(take(js2) == text);

  const auto path = std::filesystem::temp_directory_path() / "qsearch_capi_graph.json";
  REQUIRE(qs_graph_save(g, path.c_str()) == QS_OK);
  qs_graph* loaded = nullptr;
  REQUIRE(qs_graph_load(path.c_str(), &loaded) == QS_OK);
  CHECK(qs_graph_edge_count(loaded) == 800);

  qs_graph* w = nullptr;
  REQUIRE(qs_graph_weighted(g, 3, &w) == QS_OK);
  CHECK(qs_graph_weighted(w, 3, &loaded) == QS_ERR_INVALID_ARGUMENT);
  qs_graph_free(w);
  qs_graph_free(loaded);
  qs_graph_free(h);
  qs_graph_free(g);
  qs_graph_free(nullptr);
}

TEST_CASE("status codes and error messages") {
  qs_graph* g = nullptr;
  CHECK(qs_graph_generate("nope", "{}", 0, &g) == QS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qs_last_error()).find("nope") != std::string::npos);
  CHECK(qs_graph_generate("ws", "{not json", 0, &g) == QS_ERR_PARSE);
  CHECK(qs_graph_generate("er", R"({"n":200,"p":0.001,"max_attempts":2})", 1, &g) ==
        QS_ERR_GENERATION);
  CHECK(qs_graph_load("/nonexistent/graph.json", &g) == QS_ERR_IO);
  CHECK(qs_graph_generate(nullptr, "{}", 0, &g) == QS_ERR_INVALID_ARGUMENT);
  REQUIRE(qs_graph_generate("complete", R"({"n":2})", 0, &g) == QS_OK);
  qs_outcome* o = nullptr;
  CHECK(qs_search(g, "min", nullptr, &o) == QS_ERR_NUMERIC);  // no overlap crossing
  qs_graph_free(g);
  CHECK(std::strlen(qs_version()) > 0);
}

TEST_CASE("search, metrics and series") {
  qs_graph* g = nullptr;
  REQUIRE(qs_graph_generate("complete", R"({"n":64})", 0, &g) == QS_OK);
  qs_outcome* o = nullptr;
  REQUIRE(qs_search(g, "min", R"({"method":"overlap"})", &o) == QS_OK);
  CHECK(qs_outcome_gamma(o) == doctest::Approx(1.0 / 64).epsilon(0.1));
  CHECK(qs_outcome_p(o) >= 0.9);
  CHECK(qs_outcome_target(o) == 0);
  char* js = nullptr;
  REQUIRE(qs_outcome_to_json(o, &js) == QS_OK);
  const Json doc = Json::parse(take(js));
  CHECK(doc["Q"].get<double>() == qs_outcome_q(o));
  qs_outcome_free(o);

  char* mj = nullptr;
  REQUIRE(qs_metrics(g, 2, &mj) == QS_OK);
  CHECK(Json::parse(take(mj))["L"].get<double>() == 1.0);

  std::vector<double> p(100);
  REQUIRE(qs_probability_series(g, 1.0 / 64, 0, 0.5, p.size(), p.data()) == QS_OK);
  CHECK(p[0] == doctest::Approx(1.0 / 64).epsilon(1e-12));
  CHECK(qs_probability_series(g, 1.0 / 64, 0, -1.0, p.size(), p.data()) ==
        QS_ERR_INVALID_ARGUMENT);
  qs_graph_free(g);
}

TEST_CASE("ingest fixture end to end") {
  qs_graph* g = nullptr;
  const std::string path = std::string(QSEARCH_FIXTURES) + "/synthetic_network.txt";
  REQUIRE(qs_graph_ingest(path.c_str(), "plain", &g) == QS_OK);
  CHECK(qs_graph_node_count(g) == 62);
  char* js = nullptr;
  REQUIRE(qs_graph_to_json(g, &js) == QS_OK);
  const Json doc = Json::parse(take(js));
  CHECK(doc["metadata"]["lcc_extracted"] == true);
  CHECK(doc["metadata"]["duplicates_dropped"] == 2);  // "5 6" and reversed "29 27"
  CHECK(doc["metadata"]["self_loops_dropped"] == 1);
  qs_outcome* o = nullptr;
  REQUIRE(qs_search(g, "max", nullptr, &o) == QS_OK);
  CHECK(qs_outcome_p(o) > 0.0);
  CHECK(qs_outcome_p(o) <= 1.0);
  qs_outcome_free(o);
  qs_graph_free(g);
}

TEST_CASE("fits, sweeps, collapse and verification") {
  const double x[] = {1, 2, 4, 8, 16};
  double y[5];
  for (int i = 0; i < 5; ++i) y[i] = 3.0 * std::pow(x[i], 0.75);
  char* js = nullptr;
  REQUIRE(qs_fit_points("power", x, y, 5, nullptr, &js) == QS_OK);
  const Json f = Json::parse(take(js));
  CHECK(f["params"]["b"]["value"].get<double>() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(qs_fit_points("f9", x, y, 5, nullptr, &js) == QS_ERR_INVALID_ARGUMENT);

  const auto out = std::filesystem::temp_directory_path() / "qsearch_capi_sweep.csv";
  std::filesystem::remove(out);
  const Json plan{{"groups",
                   {{{"family", "ws"},
                     {"params", {{"n", {40, 60}}, {"beta", {0.0, 0.2}}}},
                     {"seeds", {1, 2}}},
                    {{"family", "er"}, {"params", {{"n", 30}, {"p", 0.01}, {"max_attempts", 1}}}}}}};
  char* summary = nullptr;
  CHECK(qs_sweep(plan.dump().c_str(), out.c_str(), 2, &summary) == QS_ERR_PARTIAL);
  CHECK(Json::parse(take(summary))["errors"] == 1);

  char* cj = nullptr;
  char* csv = nullptr;
  REQUIRE(qs_collapse(out.c_str(), R"({"family":"ws"})", &cj, &csv) == QS_OK);
  const Json c = Json::parse(take(cj));
  CHECK(c["n_points"] == 4);
  CHECK(take(csv).rfind("family,N,param", 0) == 0);
  char* fj = nullptr;
  REQUIRE(qs_fit_records(out.c_str(), R"({"family":"ws","x":"L","y":"gamma","average":false})",
                         &fj) == QS_OK);
  CHECK(Json::parse(take(fj))["n_points"] == 8);

  char* vj = nullptr;
  int ok = 0;
  REQUIRE(qs_verify("resolvent", nullptr, 0, &vj, &ok) == QS_OK);
  CHECK(ok == 1);
  take(vj);
  CHECK(qs_verify("bogus", nullptr, 0, &vj, &ok) == QS_ERR_INVALID_ARGUMENT);
}
