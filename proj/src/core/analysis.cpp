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

#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "core/error.hpp"
#include "core/optimize.hpp"

namespace qsearch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string(what) + " must be positive and finite");
    }
  }
}

struct LineFit {
  double intercept = 0.0, slope = 0.0;
  double se_intercept = kNaN, se_slope = kNaN;
  double rss = 0.0;
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  if (sxx == 0.0) throw InvalidArgument("fit needs at least two distinct x values");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  if (x.size() > 2) {
    const double s2 = f.rss / (n - 2.0);
    f.se_slope = std::sqrt(s2 / sxx);
    f.se_intercept = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

double rms(const std::vector<double>& r) {
  if (r.empty()) return 0.0;
  double s = 0.0;
  for (double x : r) s += x * x;
  return std::sqrt(s / static_cast<double>(r.size()));
}

std::vector<double> logs(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(v[i]);
  return out;
}

}  // namespace

double FitResult::value(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.value;
  }
  throw InvalidArgument("fit has no parameter '" + name + "'");
}

double FitResult::error(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.stderr_;
  }
  throw InvalidArgument("fit has no parameter '" + name + "'");
}

Json FitResult::to_json() const {
  Json ps = Json::object();
  for (const auto& p : params) {
    ps[p.name] = {{"value", p.value},
                  {"stderr", std::isfinite(p.stderr_) ? Json(p.stderr_) : Json()},
                  {"fixed", p.fixed}};
  }
  return Json{{"model", model},
              {"params", ps},
              {"residual_rms", residual_rms},
              {"rmspe", rmspe},
              {"n_points", n_points},
              {"converged", converged},
              {"flags", flags}};
}

double rmspe(const std::vector<double>& observed,
             const std::vector<double>& fitted) {
  if (observed.size() != fitted.size() || observed.empty()) {
    throw InvalidArgument("rmspe needs equally sized, non-empty inputs");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i] == 0.0) throw InvalidArgument("rmspe: zero observation");
    const double r = (observed[i] - fitted[i]) / observed[i];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(observed.size()));
}

FitResult fit_power_law(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("xs and ys differ in length");
  if (xs.size() < 3) throw InvalidArgument("power-law fit needs at least 3 points");
  require_positive(xs, "x");
  require_positive(ys, "y");
  const auto lx = logs(xs), ly = logs(ys);
  const LineFit f = ols(lx, ly);
  FitResult r;
  r.model = "power";
  const double u = std::exp(f.intercept);
  r.params = {{"u", u, u * f.se_intercept, false}, {"b", f.slope, f.se_slope, false}};
  r.n_points = xs.size();
  std::vector<double> res(xs.size()), fitted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    res[i] = ly[i] - f.intercept - f.slope * lx[i];
    fitted[i] = u * std::pow(xs[i], f.slope);
  }
  r.residual_rms = rms(res);
  r.rmspe = rmspe(ys, fitted);
  return r;
}

FitResult fit_exponent_drift(const std::vector<double>& Ns,
                             const std::vector<double>& alphas) {
  if (Ns.size() != alphas.size()) throw InvalidArgument("Ns and alphas differ in length");
  if (Ns.size() < 4) throw InvalidArgument("drift fit needs at least 4 points");
  require_positive(Ns, "N");
  const std::size_t m = Ns.size();
  // Linear (p, q) at fixed r.
  auto solve = [&](double r, double* p, double* q) {
    double s1 = 0, sz = 0, szz = 0, sy = 0, szy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double z = std::pow(Ns[i], r);
      s1 += 1;
      sz += z;
      szz += z * z;
      sy += alphas[i];
      szy += z * alphas[i];
    }
    const double det = s1 * szz - sz * sz;
    if (std::abs(det) <= 1e-14 * s1 * szz) {
      *q = 0.0;
      *p = sy / s1;
    } else {
      *q = (s1 * szy - sz * sy) / det;
      *p = (sy - *q * sz) / s1;
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = alphas[i] - *p - *q * std::pow(Ns[i], r);
      rss += e * e;
    }
    return rss;
  };
  auto objective = [&](double r) {
    double p, q;
    return solve(r, &p, &q);
  };
  // Scan r, refine the best bracket by golden section.
  std::vector<double> grid;
  for (int i = 0; i <= 160; ++i) grid.push_back(-4.0 + 0.05 * i);
  grid.erase(std::remove_if(grid.begin(), grid.end(),
                            [](double r) { return std::abs(r) < 1e-9; }),
             grid.end());
  std::size_t best = 0;
  double best_val = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = objective(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  double r = opt::golden_section(objective, lo, hi, 1e-13);
  double p, q;
  solve(r, &p, &q);

  const opt::ResidualFn resid = [&](const opt::Vec& x, opt::Vec& out) {
    for (std::size_t i = 0; i < m; ++i) {
      out[static_cast<Eigen::Index>(i)] = alphas[i] - x[0] - x[1] * std::pow(Ns[i], x[2]);
    }
  };
  FitResult f;
  f.model = "drift";
  f.n_points = m;
  opt::Vec x0(3);
  x0 << p, q, r;
  opt::LsqResult lm = opt::levenberg_marquardt(resid, static_cast<int>(m), x0);
  if (!(lm.rss <= objective(r) * (1.0 + 1e-12) + 1e-300)) {
    lm.x = x0;
    lm.stderr_ = opt::standard_errors(resid, static_cast<int>(m), x0);
    lm.rss = objective(r);
  }
  f.params = {{"p", lm.x[0], lm.stderr_[0], false},
              {"q", lm.x[1], lm.stderr_[1], false},
              {"r", lm.x[2], lm.stderr_[2], false}};
  if (std::abs(lm.x[1]) <= 1e-10 * std::max(1.0, std::abs(lm.x[0]))) {
    f.flags.push_back("r_unidentifiable");
  }
  opt::Vec res(m);
  resid(lm.x, res);
  f.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(m));
  std::vector<double> fitted(m);
  bool any_zero = false;
  for (std::size_t i = 0; i < m; ++i) {
    fitted[i] = lm.x[0] + lm.x[1] * std::pow(Ns[i], lm.x[2]);
    any_zero = any_zero || alphas[i] == 0.0;
  }
  f.rmspe = any_zero ? kNaN : rmspe(alphas, fitted);
  return f;
}

std::string to_string(ScalingModel m) {
  switch (m) {
    case ScalingModel::kF1: return "f1";
    case ScalingModel::kF2: return "f2";
    case ScalingModel::kF3: return "f3";
  }
  return "f1";
}

ScalingModel parse_scaling_model(const std::string& s) {
  if (s == "f1") return ScalingModel::kF1;
  if (s == "f2") return ScalingModel::kF2;
  if (s == "f3") return ScalingModel::kF3;
  throw InvalidArgument("scaling model must be f1|f2|f3, got '" + s + "'");
}

double scaling_function(ScalingModel m, const std::vector<double>& p,
                        double g) {
  switch (m) {
    case ScalingModel::kF1:
      return 1.0 / (p[0] + std::pow(p[3] * g + p[1], p[2]));
    case ScalingModel::kF2:
      return std::pow(p[0], -g);
    case ScalingModel::kF3:
      return std::tanh(std::sqrt(g / (g + p[3]))) / (p[0] * std::pow(g, p[1]) + p[2] * g);
  }
  return kNaN;
}

FitResult fit_scaling_function(const std::vector<std::pair<double, double>>& points,
                               ScalingModel model,
                               const std::map<std::string, double>& fixed) {
  if (points.size() < 6) throw InvalidArgument("scaling fit needs at least 6 points");
  for (const auto& [g, p] : points) {
    if (!(g > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("P must lie in (0, 1]");
  }
  const std::vector<std::string> names =
      model == ScalingModel::kF2 ? std::vector<std::string>{"A"}
                                 : std::vector<std::string>{"A", "B", "C", "D"};
  std::vector<double> base = model == ScalingModel::kF1   ? std::vector<double>{1.0, 0.1, 1.5, 1.0}
                             : model == ScalingModel::kF2 ? std::vector<double>{2.0}
                                                          : std::vector<double>{1.0, 1.0, 0.1, 1.0};
  for (const auto& [k, v] : fixed) {
    if (std::find(names.begin(), names.end(), k) == names.end()) {
      throw InvalidArgument("model " + to_string(model) + " has no parameter '" + k + "'");
    }
  }
  std::vector<int> free_idx;
  std::vector<double> full(4, 0.0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = fixed.find(names[i]);
    if (it != fixed.end()) full[i] = it->second;
    else free_idx.push_back(static_cast<int>(i));
  }
  const int m = static_cast<int>(points.size());
  auto params_from = [&](const opt::Vec& x) {
    std::vector<double> p = full;
    for (std::size_t k = 0; k < free_idx.size(); ++k) p[free_idx[k]] = x[static_cast<Eigen::Index>(k)];
    return p;
  };
  const opt::ResidualFn resid = [&](const opt::Vec& x, opt::Vec& out) {
    const auto p = params_from(x);
    for (int i = 0; i < m; ++i) {
      out[i] = points[i].second - scaling_function(model, p, points[i].first);
    }
  };

  FitResult f;
  f.model = to_string(model);
  f.n_points = points.size();
  std::vector<double> values = full;
  std::vector<double> errors(names.size(), 0.0);
  if (!free_idx.empty()) {
    // Eight starts: every free parameter scaled by 10^(-1 + 2k/7).
    opt::LsqResult best;
    best.rss = INFINITY;
    for (int k = 0; k < 8; ++k) {
      const double scale = std::pow(10.0, -1.0 + 2.0 * k / 7.0);
      opt::Vec x0(static_cast<Eigen::Index>(free_idx.size()));
      for (std::size_t j = 0; j < free_idx.size(); ++j) {
        x0[static_cast<Eigen::Index>(j)] = base[free_idx[j]] * scale;
      }
      opt::LsqResult r = opt::levenberg_marquardt(resid, m, x0);
      if (std::isfinite(r.rss) && r.rss < best.rss) best = r;
    }
    if (!std::isfinite(best.rss)) {
      throw NumericError("scaling fit " + to_string(model) + " did not converge");
    }
    f.converged = best.converged;
    values = params_from(best.x);
    for (std::size_t j = 0; j < free_idx.size(); ++j) {
      errors[free_idx[j]] = best.stderr_[static_cast<Eigen::Index>(j)];
    }
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const bool is_fixed = fixed.count(names[i]) != 0;
    f.params.push_back({names[i], values[i], is_fixed ? 0.0 : errors[i], is_fixed});
  }
  std::vector<double> obs(points.size()), fit(points.size()), res(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    obs[i] = points[i].second;
    fit[i] = scaling_function(model, values, points[i].first);
    res[i] = obs[i] - fit[i];
  }
  f.residual_rms = rms(res);
  f.rmspe = rmspe(obs, fit);
  return f;
}

double stretched_exponential(double a, double b, double x) {
  return std::exp(a * (std::pow(x, b) - 1.0));
}

FitResult fit_stretched_exponential(const std::vector<std::pair<double, double>>& points,
                                    std::pair<double, double> anchor) {
  if (points.size() < 2) throw InvalidArgument("stretched-exponential fit needs at least 2 points");
  if (!(anchor.first > 0.0 && anchor.second > 0.0)) throw InvalidArgument("anchor must be positive");
  std::vector<double> x, ly;
  for (const auto& [px, py] : points) {
    if (!(px > 0.0 && py > 0.0)) throw InvalidArgument("x and y must be positive");
    x.push_back(px / anchor.first);
    ly.push_back(std::log(py / anchor.second));
  }
  const std::size_t m = x.size();
  FitResult f;
  f.model = "stretched_exp";
  f.n_points = m;
  const bool degenerate =
      std::all_of(x.begin(), x.end(), [](double v) { return std::abs(v - 1.0) < 1e-14; });
  if (degenerate) {
    f.params = {{"a", kNaN, kNaN, false}, {"b", kNaN, kNaN, false}};
    f.flags.push_back("unidentifiable: all x at the anchor");
    f.converged = false;
    f.residual_rms = rms(ly);
    f.rmspe = kNaN;
    return f;
  }
  auto best_a = [&](double b, double* a) {
    double su = 0, sl = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double u = std::pow(x[i], b) - 1.0;
      su += u * u;
      sl += u * ly[i];
    }
    *a = su > 0 ? sl / su : 0.0;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = ly[i] - *a * (std::pow(x[i], b) - 1.0);
      rss += e * e;
    }
    return std::isfinite(rss) ? rss : INFINITY;
  };
  // Eight log-spaced |b| starts per sign, each refined by golden section
  // between its neighbours.
  std::vector<double> grid;
  for (int sgn : {-1, 1}) {
    for (int k = 0; k < 8; ++k) grid.push_back(sgn * std::pow(10.0, -1.5 + 3.5 * k / 7.0));
  }
  std::sort(grid.begin(), grid.end());
  double best_b = grid[0], best_rss = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lo = i == 0 ? grid[0] * 1.5 : grid[i - 1];
    const double hi = i + 1 == grid.size() ? grid[i] * 1.5 : grid[i + 1];
    if (lo < 0 && hi > 0) continue;  // do not straddle b = 0
    double a;
    const double b = opt::golden_section([&](double bb) { return best_a(bb, &a); }, lo, hi, 1e-12);
    const double rss = best_a(b, &a);
    if (rss < best_rss) {
      best_rss = rss;
      best_b = b;
    }
  }
  double a0;
  best_a(best_b, &a0);
  const opt::ResidualFn resid = [&](const opt::Vec& p, opt::Vec& out) {
    for (std::size_t i = 0; i < m; ++i) {
      out[static_cast<Eigen::Index>(i)] = ly[i] - p[0] * (std::pow(x[i], p[1]) - 1.0);
    }
  };
  opt::Vec x0(2);
  x0 << a0, best_b;
  opt::LsqResult lm = opt::levenberg_marquardt(resid, static_cast<int>(m), x0);
  if (!(lm.rss <= best_rss)) {
    lm.x = x0;
    lm.rss = best_rss;
    lm.stderr_ = opt::standard_errors(resid, static_cast<int>(m), x0);
  }
  f.params = {{"a", lm.x[0], lm.stderr_[0], false}, {"b", lm.x[1], lm.stderr_[1], false}};
  opt::Vec res(m);
  resid(lm.x, res);
  f.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(m));
  std::vector<double> obs(m), fit(m);
  for (std::size_t i = 0; i < m; ++i) {
    obs[i] = std::exp(ly[i]);
    fit[i] = stretched_exponential(lm.x[0], lm.x[1], x[i]);
  }
  f.rmspe = rmspe(obs, fit);
  return f;
}

namespace {

struct Moments {
  double mean = 0.0;
  double sem = 0.0;  // standard error of the mean
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double s = 0.0;
    for (double x : v) s += (x - m.mean) * (x - m.mean);
    m.sem = std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return m;
}

// Master curve through (1, 1) on pooled normalized points.
FitResult fit_master(const std::vector<double>& x, const std::vector<double>& y,
                     MasterCurve curve, std::vector<double>* residuals) {
  FitResult f;
  f.n_points = x.size();
  residuals->assign(x.size(), 0.0);
  if (curve == MasterCurve::kConstant) {
    f.model = "constant";
    for (std::size_t i = 0; i < x.size(); ++i) (*residuals)[i] = std::log(y[i]);
  } else if (curve == MasterCurve::kPower) {
    f.model = "power_through_reference";
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lx = std::log(x[i]);
      sxx += lx * lx;
      sxy += lx * std::log(y[i]);
    }
    if (sxx == 0.0) {
      f.params = {{"alpha", kNaN, kNaN, false}};
      f.flags.push_back("exponent undefined: all points at the reference");
      f.converged = false;
      return f;
    }
    const double alpha = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      (*residuals)[i] = std::log(y[i]) - alpha * std::log(x[i]);
      rss += (*residuals)[i] * (*residuals)[i];
    }
    const double se = x.size() > 1 ? std::sqrt(rss / static_cast<double>(x.size() - 1) / sxx) : kNaN;
    f.params = {{"alpha", alpha, se, false}};
  } else {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({x[i], y[i]});
    f = fit_stretched_exponential(pts);
    if (f.converged || f.flags.empty()) {
      const double a = f.value("a"), b = f.value("b");
      for (std::size_t i = 0; i < x.size(); ++i) {
        (*residuals)[i] = std::log(y[i]) - a * (std::pow(x[i], b) - 1.0);
      }
    }
    return f;
  }
  f.residual_rms = rms(*residuals);
  std::vector<double> fitted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fitted[i] = y[i] / std::exp((*residuals)[i]);
  f.rmspe = rmspe(y, fitted);
  return f;
}

}  // namespace

CollapseSet build_collapse(const std::vector<CollapseRecord>& records,
                           const CollapseOptions& opts) {
  using Key = std::tuple<std::string, std::size_t, double>;
  std::map<Key, std::vector<const CollapseRecord*>> groups;
  for (const auto& r : records) {
    if (!(r.L > 0 && r.gamma > 0 && r.Q > 0 && r.P > 0)) {
      throw InvalidArgument("collapse records need positive L, gamma, Q, P");
    }
    groups[{r.family, r.n, r.param}].push_back(&r);
  }
  if (groups.empty()) throw InvalidArgument("collapse needs at least one record");

  auto reference_param = [&](double param) {
    switch (opts.reference) {
      case ReferenceMode::kZero: return 0.0;
      case ReferenceMode::kValue: return opts.reference_value;
      case ReferenceMode::kScaleFree: return param <= 3.0 ? 2.0 : 4.5;
    }
    return 0.0;
  };

  struct Mean {
    std::size_t n_seeds;
    Moments L, gamma, Q, P;
  };
  std::map<Key, Mean> means;
  for (const auto& [key, rs] : groups) {
    // Seeds are sorted so the float summation order does not depend on
    // record order.
    std::vector<const CollapseRecord*> sorted = rs;
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->seed < b->seed; });
    std::vector<double> L, g, Q, P;
    for (auto* r : sorted) {
      L.push_back(r->L);
      g.push_back(r->gamma);
      Q.push_back(r->Q);
      P.push_back(r->P);
    }
    means[key] = {sorted.size(), moments(L), moments(g), moments(Q), moments(P)};
  }

  CollapseSet out;
  switch (opts.reference) {
    case ReferenceMode::kZero: out.reference = "param=0"; break;
    case ReferenceMode::kValue: {
      std::ostringstream os;
      os.precision(17);
      os << "param=" << opts.reference_value;
      out.reference = os.str();
      break;
    }
    case ReferenceMode::kScaleFree: out.reference = "lambda0=2 (lambda<=3), 4.5 (lambda>3)"; break;
  }
  for (const auto& [key, m] : means) {
    const auto& [family, n, param] = key;
    const double ref = reference_param(param);
    auto it = means.find({family, n, ref});
    if (it == means.end()) {
      std::ostringstream os;
      os.precision(17);
      os << "missing reference (param=" << ref << ") for family " << family << " n=" << n;
      throw InvalidArgument(os.str());
    }
    const Mean& r = it->second;
    CollapsePoint p;
    p.family = family;
    p.n = n;
    p.param = param;
    p.ref_param = ref;
    p.n_seeds = m.n_seeds;
    p.L = m.L.mean;
    p.gamma = m.gamma.mean;
    p.Q = m.Q.mean;
    p.P = m.P.mean;
    p.x = m.L.mean / r.L.mean;
    p.y_gamma = m.gamma.mean / r.gamma.mean;
    p.y_Q = m.Q.mean / r.Q.mean;
    p.y_P = m.P.mean / r.P.mean;
    p.stderr_gamma = m.gamma.sem / r.gamma.mean;
    p.stderr_Q = m.Q.sem / r.Q.mean;
    p.stderr_P = m.P.sem / r.P.mean;
    out.points.push_back(p);
  }

  std::vector<double> x, yg, yq, yp, L, g, Q, P;
  for (const auto& p : out.points) {
    x.push_back(p.x);
    yg.push_back(p.y_gamma);
    yq.push_back(p.y_Q);
    yp.push_back(p.y_P);
    L.push_back(p.L);
    g.push_back(p.gamma);
    Q.push_back(p.Q);
    P.push_back(p.P);
  }
  std::vector<double> rg, rq, rp;
  out.fit_gamma = fit_master(x, yg, opts.curve, &rg);
  out.fit_Q = fit_master(x, yq, opts.curve, &rq);
  out.fit_P = fit_master(x, yp, opts.curve, &rp);
  out.exponents_defined = out.fit_gamma.converged;
  std::vector<double> all;
  all.insert(all.end(), rg.begin(), rg.end());
  all.insert(all.end(), rq.begin(), rq.end());
  all.insert(all.end(), rp.begin(), rp.end());
  out.collapse_score = rms(all);

  // Same power-law form on the unnormalized (L, quantity) cloud.
  std::vector<double> raw;
  auto raw_fit = [&](const std::vector<double>& q, FitResult* f) {
    const auto lx = logs(L), lq = logs(q);
    bool distinct = false;
    for (double v : lx) distinct = distinct || v != lx.front();
    if (!distinct || q.size() < 3) {
      f->model = "power";
      f->flags.push_back("raw fit undefined");
      for (double v : lq) raw.push_back(v - lq.front());
      return;
    }
    *f = fit_power_law(L, q);
    const double lu = std::log(f->value("u")), b = f->value("b");
    for (std::size_t i = 0; i < q.size(); ++i) raw.push_back(lq[i] - lu - b * lx[i]);
  };
  raw_fit(g, &out.raw_gamma);
  raw_fit(Q, &out.raw_Q);
  raw_fit(P, &out.raw_P);
  out.raw_score = rms(raw);
  return out;
}

Json CollapseSet::to_json() const {
  return Json{{"reference", reference},
              {"n_points", points.size()},
              {"gamma", fit_gamma.to_json()},
              {"Q", fit_Q.to_json()},
              {"P", fit_P.to_json()},
              {"raw_gamma", raw_gamma.to_json()},
              {"raw_Q", raw_Q.to_json()},
              {"raw_P", raw_P.to_json()},
              {"collapse_score", collapse_score},
              {"raw_score", raw_score},
              {"exponents_defined", exponents_defined}};
}

std::string CollapseSet::points_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "family,N,param,ref_param,L,gamma,Q,P,x,y_gamma,y_Q,y_P,n_seeds,"
        "stderr_gamma,stderr_Q,stderr_P\n";
  for (const auto& p : points) {
    os << p.family << ',' << p.n << ',' << p.param << ',' << p.ref_param << ','
       << p.L << ',' << p.gamma << ',' << p.Q << ',' << p.P << ',' << p.x << ','
       << p.y_gamma << ',' << p.y_Q << ',' << p.y_P << ',' << p.n_seeds << ','
       << p.stderr_gamma << ',' << p.stderr_Q << ',' << p.stderr_P << '\n';
  }
  return os.str();
}

}  // namespace qsearch
