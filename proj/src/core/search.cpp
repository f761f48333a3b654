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

#include "core/search.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "core/error.hpp"

namespace qsearch {
namespace {

double max_weighted_degree(const Graph& g) {
  double k = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) k = std::max(k, g.weighted_degree(i));
  return k;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw InvalidArgument("gamma scan needs 0 < gamma_min < gamma_max");
  }
  if (points < 3) throw InvalidArgument("gamma scan needs at least 3 points");
  std::vector<double> grid(points);
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < points; ++i) {
    grid[i] = lo * std::exp(ratio * i / (points - 1));
  }
  grid.back() = hi;
  return grid;
}

std::string format_scan(const std::vector<ScanPoint>& scan) {
  std::ostringstream os;
  os.precision(6);
  os << "scan trace (gamma, o0, o1, gap):";
  for (const ScanPoint& p : scan) {
    os << "\n  " << p.gamma << ' ' << p.o0 << ' ' << p.o1 << ' ' << p.gap;
  }
  return os.str();
}

// FFTW planning is not thread safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Mean of per-window maxima over [kQ, (k+1)Q), k < max_windows.
PeakAverage window_average(const std::vector<double>& p, double dt, double Q,
                           int max_windows) {
  PeakAverage out;
  out.dt = dt;
  double sum = 0.0;
  for (int k = 0; k < max_windows; ++k) {
    const auto begin = static_cast<std::size_t>(std::ceil(k * Q / dt));
    const auto end = static_cast<std::size_t>(std::ceil((k + 1) * Q / dt));
    if (end > p.size()) break;
    if (end <= begin) throw NumericError("period shorter than the sampling step");
    const double m = *std::max_element(p.begin() + begin, p.begin() + end);
    sum += m;
    out.max_sampled = std::max(out.max_sampled, m);
    ++out.windows;
  }
  if (out.windows < 3) {
    throw NumericError("horizon holds " + std::to_string(out.windows) +
                       " peak windows, need at least 3");
  }
  out.P = sum / out.windows;
  return out;
}

struct PeriodWithSeries {
  PeriodEstimate period;
  SampledSeries series;
};

PeriodWithSeries extract_period_impl(const SpectralDecomposition& sd,
                                     const SearchOptions& opts) {
  const double gap = visible_gap(sd);
  if (!(gap >= 1e-12)) {
    throw NumericError("energy gap below 1e-12; period undefined");
  }
  const double horizon =
      std::max(opts.fft_periods * 2.0 * std::numbers::pi / gap, opts.min_horizon);
  PeriodWithSeries out;
  out.series = sample_probability(sd, horizon, opts);
  const std::vector<double>& p = out.series.p;
  const std::size_t s = p.size();
  out.period.dt = out.series.dt;
  out.period.horizon = horizon;
  out.period.samples = s;
  const double nominal = std::numbers::pi /
                         (opts.dt_divisor * sd.max_abs_contributing_energy());
  out.period.coarsened = out.series.dt > nominal * (1.0 + 1e-12);

  double mean = 0.0;
  for (double x : p) mean += x;
  mean /= static_cast<double>(s);

  const std::size_t bins = s / 2 + 1;
  double* buf = fftw_alloc_real(2 * bins);
  if (!buf) throw NumericError("FFT buffer allocation failed");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(s), buf,
                                reinterpret_cast<fftw_complex*>(buf),
                                FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < s; ++i) buf[i] = p[i] - mean;
  fftw_execute(plan);
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t j = 1; j < bins; ++j) {
    const double mag = buf[2 * j] * buf[2 * j] + buf[2 * j + 1] * buf[2 * j + 1];
    if (mag > best_mag) {
      best_mag = mag;
      best = j;
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  if (best == 0) throw NumericError("no positive frequency in the spectrum");
  // Sample i sits at t = i dt with s dt = horizon, so bin j is 2 pi j / horizon.
  const double span = out.series.dt * static_cast<double>(s);
  out.period.omega_star = 2.0 * std::numbers::pi * static_cast<double>(best) / span;
  out.period.Q = 2.0 * std::numbers::pi / out.period.omega_star;
  return out;
}

}  // namespace

std::string to_string(GammaMethod m) {
  switch (m) {
    case GammaMethod::kOverlap: return "overlap";
    case GammaMethod::kMinGap: return "mingap";
    case GammaMethod::kFixed: return "fixed";
  }
  return "overlap";
}

GammaMethod parse_gamma_method(const std::string& s) {
  if (s == "overlap") return GammaMethod::kOverlap;
  if (s == "mingap") return GammaMethod::kMinGap;
  if (s == "fixed") return GammaMethod::kFixed;
  throw InvalidArgument("method must be overlap|mingap|fixed, got '" + s + "'");
}

Json SearchOptions::to_json() const {
  return Json{{"method", qsearch::to_string(method)},
              {"fixed_gamma", fixed_gamma},
              {"gamma_w", gamma_w},
              {"gamma_min", gamma_min},
              {"gamma_max_factor", gamma_max_factor},
              {"scan_points", scan_points},
              {"rel_tol", rel_tol},
              {"overlap_tol", overlap_tol},
              {"dt_divisor", dt_divisor},
              {"fft_periods", fft_periods},
              {"min_horizon", min_horizon},
              {"peak_periods", peak_periods},
              {"max_samples", max_samples},
              {"eigen_cap", eigen.max_n}};
}

SearchOptions SearchOptions::from_json(const Json& doc) {
  SearchOptions o;
  if (doc.is_null()) return o;
  if (!doc.is_object()) throw InvalidArgument("search options must be an object");
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "method") o.method = parse_gamma_method(v.get<std::string>());
      else if (k == "fixed_gamma") o.fixed_gamma = v.get<double>();
      else if (k == "gamma_w") o.gamma_w = v.get<double>();
      else if (k == "gamma_min") o.gamma_min = v.get<double>();
      else if (k == "gamma_max_factor") o.gamma_max_factor = v.get<double>();
      else if (k == "scan_points") o.scan_points = v.get<int>();
      else if (k == "rel_tol") o.rel_tol = v.get<double>();
      else if (k == "overlap_tol") o.overlap_tol = v.get<double>();
      else if (k == "dt_divisor") o.dt_divisor = v.get<double>();
      else if (k == "fft_periods") o.fft_periods = v.get<int>();
      else if (k == "min_horizon") o.min_horizon = v.get<double>();
      else if (k == "peak_periods") o.peak_periods = v.get<int>();
      else if (k == "max_samples") o.max_samples = v.get<std::size_t>();
      else if (k == "eigen_cap") o.eigen.max_n = v.get<std::size_t>();
      else throw InvalidArgument("unknown search option '" + k + "'");
    }
  } catch (const Json::exception& ex) {
    throw InvalidArgument(std::string("bad search option value: ") + ex.what());
  }
  return o;
}

GammaOptimum optimize_gamma_overlap(const Graph& g, std::size_t target,
                                    const SearchOptions& opts) {
  const RankOneSpectrum rs(g, target, opts.gamma_w, opts.eigen);
  GammaOptimum out;
  const auto grid = log_grid(opts.gamma_min,
                             opts.gamma_max_factor * max_weighted_degree(g),
                             opts.scan_points);
  std::vector<double> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto lv = rs.lowest_levels(grid[i]);
    out.scan.push_back({grid[i], lv.o0, lv.o1, lv.e1 - lv.e0});
    diff[i] = lv.o0 - lv.o1;
  }

  double best_score = INFINITY;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double root;
    int iters = 0;
    if (diff[i] == 0.0) {
      root = grid[i];
    } else if ((diff[i] < 0.0) != (diff[i + 1] < 0.0) && diff[i + 1] != 0.0) {
      double a = grid[i], b = grid[i + 1], ga = diff[i], gb = diff[i + 1];
      while (iters < 200) {
        const bool narrow = (b - a) <= opts.rel_tol * a;
        const bool tight = std::min(std::abs(ga), std::abs(gb)) <= 0.1 * opts.overlap_tol;
        if (narrow && tight) break;
        const double m = std::sqrt(a * b);
        if (m <= a || m >= b) break;
        const auto lv = rs.lowest_levels(m);
        const double gm = lv.o0 - lv.o1;
        ++iters;
        if (gm == 0.0) {
          a = b = m;
          ga = gb = 0.0;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
          gb = gm;
        }
      }
      root = std::abs(ga) <= std::abs(gb) ? a : b;
    } else {
      continue;
    }
    out.roots.push_back(root);
    const double o0 = rs.lowest_levels(root).o0;
    const double score = std::abs(o0 - 0.5);
    if (score < best_score) {
      best_score = score;
      out.gamma = root;
      out.bracket_lo = grid[i];
      out.bracket_hi = grid[i + 1];
      out.iterations = iters;
    }
  }
  if (out.roots.empty()) {
    throw NumericError("no sign change of o0 - o1 in [" +
                       std::to_string(grid.front()) + ", " +
                       std::to_string(grid.back()) + "]; " +
                       format_scan(out.scan));
  }
  return out;
}

GammaOptimum optimize_gamma_mingap(const Graph& g, std::size_t target,
                                   const SearchOptions& opts) {
  const RankOneSpectrum rs(g, target, opts.gamma_w, opts.eigen);
  GammaOptimum out;
  const auto grid = log_grid(opts.gamma_min,
                             opts.gamma_max_factor * max_weighted_degree(g),
                             opts.scan_points);
  std::size_t best = 0;
  double lo_gap = INFINITY, hi_gap = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto lv = rs.lowest_levels(grid[i]);
    const double gap = lv.e1 - lv.e0;
    out.scan.push_back({grid[i], lv.o0, lv.o1, gap});
    if (gap < lo_gap) {
      lo_gap = gap;
      best = i;
    }
    hi_gap = std::max(hi_gap, gap);
  }
  out.flat = hi_gap - lo_gap <= 1e-12 * hi_gap;
  const std::size_t i0 = best == 0 ? 0 : best - 1;
  const std::size_t i1 = std::min(best + 1, grid.size() - 1);
  out.bracket_lo = grid[i0];
  out.bracket_hi = grid[i1];
  auto gap_at = [&](double x) {
    const auto lv = rs.lowest_levels(std::exp(x));
    return lv.e1 - lv.e0;
  };
  // Golden-section search in log(gamma).
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(grid[i0]), b = std::log(grid[i1]);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = gap_at(c), fd = gap_at(d);
  int iters = 0;
  while (b - a > opts.rel_tol && iters < 500) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = gap_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = gap_at(d);
    }
    ++iters;
  }
  out.gamma = std::exp(0.5 * (a + b));
  out.iterations = iters;
  out.roots.push_back(out.gamma);
  return out;
}

SampledSeries sample_probability(const SpectralDecomposition& sd,
                                 double horizon, const SearchOptions& opts) {
  const double emax = sd.max_abs_contributing_energy();
  if (!(emax > 0.0)) throw NumericError("no contributing energy scale");
  const double nominal = std::numbers::pi / (opts.dt_divisor * emax);
  auto count = static_cast<std::size_t>(std::ceil(horizon / nominal));
  count = std::clamp<std::size_t>(count, 8, opts.max_samples);
  SampledSeries out;
  out.dt = horizon / static_cast<double>(count);
  out.p = probability_series_uniform(sd, out.dt, count);
  return out;
}

PeriodEstimate extract_period(const SpectralDecomposition& sd,
                              const SearchOptions& opts) {
  return extract_period_impl(sd, opts).period;
}

PeakAverage average_peak_probability(const SpectralDecomposition& sd, double Q,
                                     const SearchOptions& opts) {
  if (!(Q > 0.0)) throw InvalidArgument("Q must be positive");
  if (opts.peak_periods < 3) {
    throw NumericError("horizon shorter than 3 peak windows");
  }
  const double horizon = opts.peak_periods * Q;
  SampledSeries s = sample_probability(sd, horizon, opts);
  // Pad so the closing window is complete.
  s.p.push_back(std::norm(amplitude(sd, horizon)));
  return window_average(s.p, s.dt, Q, opts.peak_periods);
}

SearchOutcome run_search_at(const Graph& g, std::size_t target,
                            const SearchOptions& opts) {
  if (!g.is_connected()) throw InvalidArgument("search needs a connected graph");
  if (target >= g.n()) throw InvalidArgument("target out of range");
  SearchOutcome out;
  out.n = g.n();
  out.target = target;
  out.method = opts.method;
  switch (opts.method) {
    case GammaMethod::kFixed:
      if (!(opts.fixed_gamma > 0.0)) throw InvalidArgument("fixed_gamma must be positive");
      out.gamma_opt = opts.fixed_gamma;
      break;
    case GammaMethod::kOverlap:
    case GammaMethod::kMinGap: {
      const GammaOptimum opt = opts.method == GammaMethod::kOverlap
                                   ? optimize_gamma_overlap(g, target, opts)
                                   : optimize_gamma_mingap(g, target, opts);
      out.gamma_opt = opt.gamma;
      out.bracket_lo = opt.bracket_lo;
      out.bracket_hi = opt.bracket_hi;
      out.iterations = opt.iterations;
      out.roots = opt.roots;
      out.flat_landscape = opt.flat;
      break;
    }
  }
  const SpectralDecomposition sd = eigendecompose(
      build_hamiltonian(g, out.gamma_opt, target, opts.gamma_w), opts.eigen);
  const Overlaps ov = overlaps(sd);
  out.o0 = ov.o0;
  out.o1 = ov.o1;
  out.degenerate = ov.degenerate;
  out.gap = visible_gap(sd);

  PeriodWithSeries pw = extract_period_impl(sd, opts);
  out.omega_star = pw.period.omega_star;
  out.Q = pw.period.Q;
  out.horizon = pw.period.horizon;
  out.dt = pw.period.dt;
  out.samples = pw.period.samples;
  out.grid_coarsened = pw.period.coarsened;
  out.first_peak_time = out.Q / 2.0;

  PeakAverage pa;
  if (opts.peak_periods >= 3 && opts.peak_periods * out.Q <= pw.period.horizon) {
    pw.series.p.push_back(std::norm(amplitude(sd, pw.period.horizon)));
    pa = window_average(pw.series.p, pw.series.dt, out.Q, opts.peak_periods);
  } else {
    pa = average_peak_probability(sd, out.Q, opts);
  }
  out.P = pa.P;
  out.windows = pa.windows;
  out.max_sampled_P = pa.max_sampled;
  return out;
}

SearchOutcome run_search(const Graph& g, const TargetSelector& target,
                         const SearchOptions& opts) {
  return run_search_at(g, select_target(g, target), opts);
}

Json SearchOutcome::to_json() const {
  return Json{{"n", n},
              {"target", target},
              {"gamma_opt", gamma_opt},
              {"method", qsearch::to_string(method)},
              {"o0", o0},
              {"o1", o1},
              {"gap", gap},
              {"omega_star", omega_star},
              {"Q", Q},
              {"P", P},
              {"diagnostics",
               {{"bracket", {bracket_lo, bracket_hi}},
                {"iterations", iterations},
                {"roots", roots},
                {"degenerate", degenerate},
                {"flat_landscape", flat_landscape},
                {"grid_coarsened", grid_coarsened},
                {"horizon", horizon},
                {"dt", dt},
                {"samples", samples},
                {"windows", windows},
                {"first_peak_time", first_peak_time},
                {"max_sampled_P", max_sampled_P}}}};
}

}  // namespace qsearch
