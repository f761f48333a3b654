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

#include "core/records.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "core/error.hpp"

namespace qsearch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kColumns[] = {
    "key",       "family",  "n",        "n_requested", "params",
    "param",     "seed",    "target_policy", "target_node", "weighted",
    "L",         "C",       "k_min",    "k_med",       "k_max",
    "gamma_opt", "method",  "o0",       "o1",          "gap",
    "omega_star", "Q",      "P",        "runtime_ms",  "version",
    "config_hash", "error"};
constexpr std::size_t kNumColumns = sizeof(kColumns) / sizeof(kColumns[0]);

// Commas and line breaks would break the dialect; messages are the only
// free text.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

double parse_double(const std::string& s) {
  if (s.empty() || s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw ParseError("bad number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty()) return 0;
  std::size_t pos = 0;
  unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
  return v;
}

double column(const SweepRecord& r, const std::string& name) {
  if (name == "n") return static_cast<double>(r.n_requested);
  if (name == "n_actual") return static_cast<double>(r.n);
  if (name == "L") return r.L;
  if (name == "C") return r.C;
  if (name == "param") return r.param;
  if (name == "gamma") return r.gamma_opt;
  if (name == "Q") return r.Q;
  if (name == "P") return r.P;
  if (name == "gap") return r.gap;
  throw InvalidArgument("unknown record column '" + name + "'");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string records_header() {
  std::string h;
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    if (i) h += ',';
    h += kColumns[i];
  }
  return h;
}

std::string to_csv_row(const SweepRecord& r) {
  std::ostringstream os;
  const bool ok = r.ok();
  auto num = [&](double v) { return ok ? format_double(v) : std::string(); };
  auto cnt = [&](std::size_t v) { return ok ? std::to_string(v) : std::string(); };
  os << sanitize(r.key) << ',' << r.family << ',' << cnt(r.n) << ','
     << r.n_requested << ',' << sanitize(r.params) << ',' << format_double(r.param)
     << ',' << r.seed << ',' << r.target_policy << ',' << cnt(r.target_node) << ','
     << (r.weighted ? 1 : 0) << ',' << num(r.L) << ',' << num(r.C) << ','
     << cnt(r.k_min) << ',' << cnt(r.k_med) << ',' << cnt(r.k_max) << ','
     << num(r.gamma_opt) << ',' << r.method << ',' << num(r.o0) << ','
     << num(r.o1) << ',' << num(r.gap) << ',' << num(r.omega_star) << ','
     << num(r.Q) << ',' << num(r.P) << ',' << format_double(r.runtime_ms) << ','
     << r.version << ',' << r.config_hash << ',' << sanitize(r.error);
  return os.str();
}

SweepRecord parse_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  f.push_back(cur);
  if (f.size() != kNumColumns) {
    throw ParseError("record row has " + std::to_string(f.size()) +
                     " fields, expected " + std::to_string(kNumColumns));
  }
  SweepRecord r;
  try {
    r.key = f[0];
    r.family = f[1];
    r.n = parse_u64(f[2]);
    r.n_requested = parse_u64(f[3]);
    r.params = f[4];
    r.param = parse_double(f[5]);
    r.seed = parse_u64(f[6]);
    r.target_policy = f[7];
    r.target_node = parse_u64(f[8]);
    r.weighted = f[9] == "1";
    r.L = parse_double(f[10]);
    r.C = parse_double(f[11]);
    r.k_min = parse_u64(f[12]);
    r.k_med = parse_u64(f[13]);
    r.k_max = parse_u64(f[14]);
    r.gamma_opt = parse_double(f[15]);
    r.method = f[16];
    r.o0 = parse_double(f[17]);
    r.o1 = parse_double(f[18]);
    r.gap = parse_double(f[19]);
    r.omega_star = parse_double(f[20]);
    r.Q = parse_double(f[21]);
    r.P = parse_double(f[22]);
    r.runtime_ms = parse_double(f[23]);
    r.version = f[24];
    r.config_hash = f[25];
    r.error = f[26];
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad record row: ") + e.what());
  }
  return r;
}

std::vector<SweepRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != records_header()) throw ParseError("unexpected records header");
  std::vector<SweepRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line));
  }
  return rows;
}

std::vector<SweepRecord> read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open records file " + path);
  return read_records(in);
}

void write_records_file(const std::string& path,
                        const std::vector<SweepRecord>& rows) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << records_header() << '\n';
    for (const auto& r : rows) out << to_csv_row(r) << '\n';
    out.flush();
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::vector<CollapseRecord> to_collapse_records(
    const std::vector<SweepRecord>& rows, const std::string& family) {
  std::vector<CollapseRecord> out;
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    if (!family.empty() && r.family != family) continue;
    out.push_back({r.family, r.n_requested, r.param, r.seed, r.L, r.gamma_opt,
                   r.Q, r.P});
  }
  return out;
}

FitResult fit_records(const std::vector<SweepRecord>& rows,
                      const FitRequest& req) {
  std::vector<const SweepRecord*> use;
  for (const auto& r : rows) {
    if (r.ok() && (req.family.empty() || r.family == req.family)) use.push_back(&r);
  }
  if (use.empty()) throw InvalidArgument("no successful records to fit");

  std::vector<double> xs, ys;
  if (req.average) {
    using Key = std::tuple<std::string, std::size_t, double>;
    std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (auto* r : use) {
      auto& g = groups[{r->family, r->n_requested, r->param}];
      g.first.push_back(column(*r, req.x));
      g.second.push_back(column(*r, req.y));
    }
    for (auto& [key, g] : groups) {
      double sx = 0, sy = 0;
      for (double v : g.first) sx += v;
      for (double v : g.second) sy += v;
      xs.push_back(sx / static_cast<double>(g.first.size()));
      ys.push_back(sy / static_cast<double>(g.second.size()));
    }
  } else {
    for (auto* r : use) {
      xs.push_back(column(*r, req.x));
      ys.push_back(column(*r, req.y));
    }
  }

  if (req.model == "power") return fit_power_law(xs, ys);
  if (req.model == "drift") return fit_exponent_drift(xs, ys);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({xs[i], ys[i]});
  if (req.model == "stretched") return fit_stretched_exponential(pts);
  return fit_scaling_function(pts, parse_scaling_model(req.model), req.fixed);
}

}  // namespace qsearch
