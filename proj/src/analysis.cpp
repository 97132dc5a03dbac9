// Copyright 2026 The nsdescent Authors
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

#include "nsd/analysis.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nsd/error.hpp"
#include "nsd/rng.hpp"

namespace nsd {
namespace {

Vector random_unit(CounterRng& rng, Eigen::Index n) {
  Vector d(n);
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.normal();
    nrm = d.norm();
  }
  return d / nrm;
}

// Orthonormal basis of {d : <g_i - g_1, d> = 0 for all active i}, on which
// first-order growth of a max-type function cancels. Empty matrix when the
// objective has no selections or the subspace is trivial.
Eigen::MatrixXd critical_subspace(const Objective& f, const Vector& x_star) {
  const auto n = x_star.size();
  if (!f.is_piecewise()) return Eigen::MatrixXd(n, 0);
  const auto act = f.active_gradients(x_star);
  if (act.size() < 2) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd diff(static_cast<Eigen::Index>(act.size() - 1), n);
  for (std::size_t i = 1; i < act.size(); ++i) {
    diff.row(static_cast<Eigen::Index>(i - 1)) = (act[i].gradient - act[0].gradient).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Vector cone_direction(CounterRng& rng, const Vector& d, double cone_radius) {
  const auto n = d.size();
  const Vector u = random_unit(rng, n);
  const double rho = cone_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  const Vector e = d + rho * u;
  return e / e.norm();
}

template <class Visit>
void scan_cone(const Vector& d, const ScanOptions& opt, Visit&& visit) {
  require(!opt.t_grid.empty(), "scan: empty t grid");
  require(opt.dir_samples >= 1, "scan: need at least one direction sample");
  const double nd = d.norm();
  require(nd > 0.0, "scan: zero direction");
  const Vector unit = d / nd;
  CounterRng rng(opt.seed);
  std::vector<Vector> dirs{unit};
  for (int k = 1; k < opt.dir_samples; ++k) dirs.push_back(cone_direction(rng, unit, opt.cone_radius));
  for (double t : opt.t_grid) {
    require(t > 0.0, "scan: t grid must be positive");
    for (const auto& dp : dirs) visit(t, dp);
  }
}

}  // namespace

GrowthFit fit_growth_order(const Objective& f, const Vector& x_star, double radius, int samples, std::uint64_t seed,
                           std::optional<double> f_star) {
  require(radius > 0.0, "fit_growth_order: radius must be positive");
  require(samples >= 100, "fit_growth_order: need at least 100 samples");
  const auto n = x_star.size();
  const double fs = f_star ? *f_star : f.eval(x_star);
  const double slack = 1e-12 * std::max(1.0, std::abs(fs));
  const Eigen::MatrixXd crit = critical_subspace(f, x_star);

  constexpr int kShells = 24;
  constexpr double kDecades = 3.0;
  CounterRng rng(seed);
  std::vector<double> rs(static_cast<std::size_t>(samples));
  std::vector<double> hs(static_cast<std::size_t>(samples));
  std::vector<int> best(kShells, -1);
  bool zero_growth = false;

  for (int s = 0; s < samples; ++s) {
    const double r = radius * std::pow(10.0, -kDecades * rng.uniform());
    Vector d;
    const int family = s % 4;
    if (family == 2 && crit.cols() > 0) {
      d = crit * random_unit(rng, crit.cols());
    } else if (family == 3 && n > 1) {
      d.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) d(i) = (rng.next_u64() >> 63) ? 1.0 : -1.0;
      d /= d.norm();
    } else {
      d = random_unit(rng, n);
    }
    const double h = f.eval(x_star + r * d) - fs;
    if (h < -slack) fail(ErrorCode::NotAMinimum, "f(x) < f* found at distance " + std::to_string(r));
    rs[static_cast<std::size_t>(s)] = r;
    hs[static_cast<std::size_t>(s)] = std::max(h, 0.0);
    if (!(h > 0.0)) zero_growth = true;
    const int shell = std::min(kShells - 1, static_cast<int>(-std::log10(r / radius) / kDecades * kShells));
    if (best[static_cast<std::size_t>(shell)] < 0 || hs[static_cast<std::size_t>(s)] < hs[static_cast<std::size_t>(best[static_cast<std::size_t>(shell)])]) {
      best[static_cast<std::size_t>(shell)] = s;
    }
  }

  // Lower envelope, ordered from the largest radii inward.
  std::vector<double> lx;
  std::vector<double> ly;
  for (int shell = 0; shell < kShells; ++shell) {
    const int s = best[static_cast<std::size_t>(shell)];
    if (s < 0 || !(hs[static_cast<std::size_t>(s)] > 0.0)) continue;
    lx.push_back(std::log(rs[static_cast<std::size_t>(s)]));
    ly.push_back(std::log(hs[static_cast<std::size_t>(s)]));
  }
  GrowthFit fit;
  fit.sample_count = samples;
  if (lx.size() < 4) {
    fit.finite_order = false;
    fit.p_hat = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.p_hat = linear_fit(lx, ly).slope;
  const std::size_t half = lx.size() / 2;
  fit.slope_outer = linear_fit(std::span(lx).first(half), std::span(ly).first(half)).slope;
  fit.slope_inner = linear_fit(std::span(lx).subspan(half), std::span(ly).subspan(half)).slope;
  fit.finite_order = !zero_growth && fit.slope_inner - fit.slope_outer <= 0.5;

  const double p_int = std::max(1.0, std::round(fit.p_hat));
  fit.beta_hat = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < rs.size(); ++s) fit.beta_hat = std::min(fit.beta_hat, hs[s] / std::pow(rs[s], p_int));
  for (std::size_t s = 0; s < rs.size(); ++s) {
    const double want = fit.beta_hat * std::pow(rs[s], fit.p_hat);
    if (want > 0.0) fit.residual = std::max(fit.residual, (want - hs[s]) / want);
  }
  return fit;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  require(lo > 0.0 && hi > lo && count >= 2, "log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double a = std::log(hi);
  const double b = std::log(lo);
  for (int k = 0; k < count; ++k) g[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (count - 1));
  g.front() = hi;
  g.back() = lo;
  return g;
}

double dini_lower(const Objective& f, const Vector& x_star, const Vector& d, int p, const ScanOptions& opt) {
  require(p >= 1, "dini_lower: p must be >= 1");
  const double fs = f.eval(x_star);
  double best = std::numeric_limits<double>::infinity();
  scan_cone(d, opt, [&](double t, const Vector& dp) {
    best = std::min(best, (f.eval(x_star + t * dp) - fs) / std::pow(t, p));
  });
  return best;
}

RatioScan semismooth_ratio_scan(const Objective& f, const Vector& x_star, const Vector& d, int p,
                                const ScanOptions& opt) {
  require(p >= 1, "semismooth_ratio_scan: p must be >= 1");
  RatioScan scan;
  scan.direction = d / d.norm();
  scan.t_grid = opt.t_grid;
  scan.cone_radius = opt.cone_radius;
  scan.min_ratio = std::numeric_limits<double>::infinity();
  scan_cone(d, opt, [&](double t, const Vector& dp) {
    const double q = f.subgradient(x_star + t * dp).dot(dp) / std::pow(t, p - 1);
    ++scan.evaluations;
    if (q < scan.min_ratio) {
      scan.min_ratio = q;
      scan.argmin_t = t;
      scan.argmin_direction = dp;
    }
  });
  return scan;
}

std::vector<double> semismooth_ratios_at(const Objective& f, const Vector& x_star, std::span<const Vector> points,
                                         int p) {
  require(p >= 1, "semismooth_ratios_at: p must be >= 1");
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& y : points) {
    const Vector d = y - x_star;
    const double t = d.norm();
    require(t > 0.0, "semismooth_ratios_at: point coincides with x*");
    out.push_back(f.subgradient(y).dot(d / t) / std::pow(t, p - 1));
  }
  return out;
}

double selection_directional_derivative(const Objective& f, std::size_t index, const Vector& x, const Vector& d,
                                        int k) {
  if (k > 4) fail(ErrorCode::Capability, "directional derivatives of order > 4 are ill-conditioned");
  require(k >= 1, "derivative order must be >= 1");
  const auto g = [&](double s) { return f.selection_value(index, x + s * d); };
  const auto stencil = [&](double h) {
    switch (k) {
      case 1: return (g(h) - g(-h)) / (2.0 * h);
      case 2: return (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
      case 3: return (g(2 * h) - 2.0 * g(h) + 2.0 * g(-h) - g(-2 * h)) / (2.0 * h * h * h);
      default: return (g(2 * h) - 4.0 * g(h) + 6.0 * g(0.0) - 4.0 * g(-h) + g(-2 * h)) / (h * h * h * h);
    }
  };
  const double h = 1e-2 * std::max(1.0, x.norm());
  return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
}

ConvexityReport selection_convexity_check(const Objective& f, const Vector& x_star, int p, int dir_samples,
                                          double cone_tol, std::uint64_t seed) {
  require(p >= 1, "selection_convexity_check: p must be >= 1");
  if (!f.is_piecewise()) fail(ErrorCode::Capability, f.name() + " has no selection functions");
  if (p > 4) fail(ErrorCode::Capability, "directional derivatives of order > 4 are ill-conditioned");
  ConvexityReport rep;
  if (p == 1) {
    rep.skipped = true;
    rep.reason = "degenerate: p = 1 leaves no k >= 2 terms";
    return rep;
  }
  CounterRng rng(seed);
  std::vector<Vector> dirs;
  for (int s = 0; s < dir_samples; ++s) dirs.push_back(random_unit(rng, x_star.size()));
  const double probe = 1e-4 * std::max(1.0, x_star.norm());

  for (std::size_t i = 1; i <= f.selection_count(); ++i) {
    SelectionConvexity sc;
    sc.index = i;
    sc.min_term.assign(static_cast<std::size_t>(p - 1), std::numeric_limits<double>::infinity());
    for (const auto& d : dirs) {
      const auto act = f.active_gradients(x_star + probe * d, 0.0);
      const bool in_cone = std::any_of(act.begin(), act.end(), [&](const ActiveGradient& a) { return a.index == i; });
      if (!in_cone) continue;
      ++sc.directions_in_cone;
      for (int k = 2; k <= p; ++k) {
        auto& m = sc.min_term[static_cast<std::size_t>(k - 2)];
        m = std::min(m, selection_directional_derivative(f, i, x_star, d, k));
      }
    }
    sc.worst = sc.directions_in_cone ? *std::min_element(sc.min_term.begin(), sc.min_term.end())
                                     : std::numeric_limits<double>::infinity();
    sc.violates = sc.worst < -cone_tol;
    rep.selections.push_back(std::move(sc));
  }
  return rep;
}

const char* to_string(Binding b) noexcept { return b == Binding::EpsTerm ? "eps" : "delta"; }

RateReport check_rate_bound(std::span<const OuterRecord> outer, const Vector& x_star, int p, const RateOptions& opt) {
  require(p >= 1, "check_rate_bound: p must be >= 1");
  require(outer.size() >= static_cast<std::size_t>(std::max(0, opt.transient_skip)) + 3,
          "check_rate_bound: too few outer records");
  RateReport rep;
  for (const auto& o : outer) {
    if (o.j < opt.transient_skip) continue;
    if (opt.j_last && o.j > *opt.j_last) continue;
    require(o.x.size() == x_star.size(), "check_rate_bound: dimension mismatch");
    RateEntry e;
    e.j = o.j;
    e.distance = (o.x - x_star).norm();
    if (p == 1) {
      e.bound = o.eps;
      e.binding = Binding::EpsTerm;
    } else {
      const double et = std::pow(o.eps, 1.0 / p);
      const double dt = std::pow(o.delta, 1.0 / (p - 1));
      e.binding = et >= dt ? Binding::EpsTerm : Binding::DeltaTerm;
      e.bound = std::max(et, dt);
    }
    e.ratio = e.distance == 0.0 ? 0.0 : e.distance / e.bound;
    rep.M_fit = std::max(rep.M_fit, e.ratio);
    if (!rep.entries.empty() && !rep.crossover_j && rep.entries.back().binding != e.binding) rep.crossover_j = e.j;
    rep.entries.push_back(e);
  }
  const double ref = opt.reference_M.value_or(rep.M_fit);
  for (const auto& e : rep.entries) {
    if (e.ratio > ref * (1.0 + opt.tol)) rep.violations.push_back(e.j);
  }
  return rep;
}

std::function<double(double)> f_rate_bound(std::function<double(double)> r, int N_bar, double L) {
  require(N_bar >= 0, "f_rate_bound: N_bar must be >= 0");
  require(L > 0.0, "f_rate_bound: L must be positive");
  return [r = std::move(r), N_bar, L](double l) { return L * r(l / (N_bar + 1.0) - 1.0); };
}

const char* to_string(RateClass c) noexcept {
  switch (c) {
    case RateClass::Sublinear: return "sublinear";
    case RateClass::Linear: return "linear";
    case RateClass::Superlinear: return "superlinear";
  }
  return "?";
}

RateClassification rate_classify(std::span<const double> seq) {
  require(seq.size() >= 5, "rate_classify: need at least 5 terms");
  for (double a : seq) require(a > 0.0 && std::isfinite(a), "rate_classify: terms must be positive and finite");
  RateClassification out;
  std::vector<double> lam;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    lam.push_back(std::log(seq[k + 1] / seq[k]));
    if (!(seq[k + 1] < seq[k])) out.unreliable = true;
  }
  std::vector<double> q;
  for (std::size_t k = 0; k + 1 < lam.size(); ++k) {
    if (lam[k] < 0.0 && lam[k + 1] < 0.0) q.push_back(lam[k + 1] / lam[k]);
  }
  const std::size_t third = std::max<std::size_t>(1, lam.size() / 3);
  const auto mean = [](auto first, auto last) { return std::accumulate(first, last, 0.0) / std::distance(first, last); };
  const double gm_first = std::exp(mean(lam.begin(), lam.begin() + static_cast<long>(third)));
  const double gm_last = std::exp(mean(lam.end() - static_cast<long>(third), lam.end()));
  const double q_med = median(q);

  if (q_med >= 1.1) {
    out.kind = RateClass::Superlinear;
    out.order = q_med;
    std::vector<double> mu;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) mu.push_back(seq[k + 1] / std::pow(seq[k], q_med));
    out.rate = median(mu);
  } else if (gm_last < 0.25 * gm_first) {
    out.kind = RateClass::Superlinear;
    out.order = 1.0;
    out.rate = gm_last;
  } else if (gm_last >= 0.99 || (gm_last > gm_first && gm_last > 0.9)) {
    out.kind = RateClass::Sublinear;
    out.order = 1.0;
    out.rate = 1.0;
  } else {
    out.kind = RateClass::Linear;
    out.order = 1.0;
    out.rate = std::exp(mean(lam.begin(), lam.end()));
  }
  return out;
}

LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "linear_fit: need two or more paired values");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, "linear_fit: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

LineFit log_linear_fit(std::span<const double> seq) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    require(seq[k] > 0.0, "log_linear_fit: terms must be positive");
    x.push_back(static_cast<double>(k));
    y.push_back(std::log(seq[k]));
  }
  return linear_fit(x, y);
}

}  // namespace nsd
