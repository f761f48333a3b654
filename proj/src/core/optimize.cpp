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

#include "core/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace qsearch::opt {

MinResult nelder_mead(const Objective& f, Vec x0, const Vec& step,
                      const NelderMeadOptions& opts) {
  const Eigen::Index n = x0.size();
  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  auto eval = [&](const Vec& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (Eigen::Index i = 0; i <= n; ++i) val[i] = eval(pts[i]);
  std::vector<Eigen::Index> order(n + 1);
  MinResult out;
  for (out.iterations = 0; out.iterations < opts.max_iter; ++out.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return val[a] < val[b]; });
    const Eigen::Index best = order.front(), worst = order.back(),
                       second = order[n - 1];
    const double fspread = std::abs(val[worst] - val[best]);
    double diam = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
      diam = std::max(diam, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    }
    const double xscale = std::max(1.0, pts[best].cwiseAbs().maxCoeff());
    if (fspread <= opts.ftol * (std::abs(val[best]) + 1e-300) + 1e-300 ||
        diam <= opts.xtol * xscale) {
      out.converged = true;
      break;
    }
    Vec centroid = Vec::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);
    const Vec xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < val[best]) {
      const Vec xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid))
                             : Vec(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = eval(xc);
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (Eigen::Index i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          val[i] = eval(pts[i]);
        }
      }
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  out.x = pts[it - val.begin()];
  out.f = *it;
  return out;
}

double golden_section(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && b - a > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

namespace {

struct Functor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const ResidualFn* fn;
  int n_inputs;
  int n_values;

  int inputs() const { return n_inputs; }
  int values() const { return n_values; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    r.resize(n_values);
    (*fn)(x, r);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i])) r[i] = 1e150;
    }
    return 0;
  }
};

}  // namespace

Vec standard_errors(const ResidualFn& r, int m, const Vec& x) {
  const Eigen::Index n = x.size();
  Vec r0(m);
  r(x, r0);
  const double rss = r0.squaredNorm();
  Eigen::MatrixXd jac(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-6 * std::max(std::abs(x[j]), 1e-3);
    Vec xp = x, xm = x, rp(m), rm(m);
    xp[j] += h;
    xm[j] -= h;
    r(xp, rp);
    r(xm, rm);
    jac.col(j) = (rp - rm) / (2.0 * h);
  }
  Vec se = Vec::Constant(n, std::numeric_limits<double>::quiet_NaN());
  if (m <= n) return se;
  const double s2 = rss / static_cast<double>(m - n);
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jtj);
  if (cod.rank() < n) return se;
  const Eigen::MatrixXd cov = s2 * cod.pseudoInverse();
  for (Eigen::Index j = 0; j < n; ++j) se[j] = std::sqrt(std::max(cov(j, j), 0.0));
  return se;
}

LsqResult levenberg_marquardt(const ResidualFn& r, int m, const Vec& x0) {
  Functor functor{&r, static_cast<int>(x0.size()), m};
  Eigen::NumericalDiff<Functor, Eigen::Central> diff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor, Eigen::Central>> lm(diff);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = 20000;
  Vec x = x0;
  const int info = lm.minimize(x);
  LsqResult out;
  out.x = x;
  out.residuals.resize(m);
  r(x, out.residuals);
  out.rss = out.residuals.squaredNorm();
  out.converged = info == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  info == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  info == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  info == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                  info == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
                  info == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                  info == Eigen::LevenbergMarquardtSpace::GtolTooSmall;
  out.stderr_ = standard_errors(r, m, x);
  return out;
}

}  // namespace qsearch::opt
