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

#include "nsd/goldstein.hpp"

#include <cmath>
#include <string>

#include "nsd/rng.hpp"

namespace nsd {
namespace {

// x + t*dir, pulled back toward x if rounding put it outside the eps-ball.
Vector ball_point(const Vector& x, const Vector& dir, double t, double eps) {
  for (int k = 0; k < 64; ++k) {
    Vector y = step_point(x, t, dir);
    if ((y - x).norm() <= eps) return y;
    t *= 0.5;
  }
  return x;
}

std::string describe(const GradientBundle& b, double norm_v) {
  return "bundle size " + std::to_string(b.entries.size()) + ", last ||v|| = " + std::to_string(norm_v);
}

}  // namespace

const char* to_string(ApproxKind kind) noexcept {
  switch (kind) {
    case ApproxKind::Critical: return "critical";
    case ApproxKind::SufficientDescent: return "sufficient_descent";
    case ApproxKind::Enriching: return "enriching";
    case ApproxKind::Failed: return "failed";
  }
  return "?";
}

const char* to_string(ApproxMode mode) noexcept {
  switch (mode) {
    case ApproxMode::Deterministic: return "deterministic";
    case ApproxMode::Random: return "random";
    case ApproxMode::Exact: return "exact";
  }
  return "?";
}

std::vector<Vector> GradientBundle::gradients() const {
  std::vector<Vector> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.gradient);
  return out;
}

bool GradientBundle::certified() const {
  for (const auto& e : entries) {
    if (!((e.point - center).norm() <= epsilon)) return false;
  }
  return true;
}

Vector step_point(const Vector& x, double t, const Vector& v) { return x + t * v; }

GradientBundle sample_gradients(Oracle& oracle, const Vector& x, double eps, int count, std::uint64_t seed) {
  require(eps > 0.0, "sample_gradients: eps must be positive");
  require(count >= 0, "sample_gradients: negative count");
  require(static_cast<std::size_t>(x.size()) == oracle.dim(), "sample_gradients: dimension mismatch");
  GradientBundle b{x, eps, {}};
  b.entries.reserve(static_cast<std::size_t>(count));
  CounterRng rng(seed);
  const auto n = x.size();
  for (int s = 0; s < count; ++s) {
    Vector dir(n);
    double nrm = 0.0;
    while (nrm == 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) dir(i) = rng.normal();
      nrm = dir.norm();
    }
    dir /= nrm;
    const double r = eps * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    Vector y = ball_point(x, dir, r, eps);
    Vector g = oracle.subgradient(y);
    b.entries.push_back({std::move(y), std::move(g)});
  }
  return b;
}

ApproxStatus sufficient_check(Oracle& oracle, const Vector& x, double eps, double c, const Vector& v, double delta,
                              std::optional<double> fx) {
  require(c > 0.0 && c < 1.0, "sufficient_check: c must lie in (0, 1)");
  require(v.allFinite(), "sufficient_check: non-finite direction");
  ApproxStatus st;
  st.v = v;
  st.norm_v = v.norm();
  st.delta = delta;
  if (st.norm_v <= delta) {
    st.kind = ApproxKind::Critical;
    return st;
  }
  const double f0 = fx ? *fx : oracle.eval(x);
  const double f1 = oracle.eval(step_point(x, eps / st.norm_v, v));
  st.kind = f1 <= f0 - c * eps * st.norm_v ? ApproxKind::SufficientDescent : ApproxKind::Enriching;
  return st;
}

BundleEntry bisect_new_subgradient(Oracle& oracle, const Vector& x, const Vector& v, double eps, double c,
                                   int max_iters, std::optional<double> fx) {
  const double nv = v.norm();
  require(nv > 0.0 && std::isfinite(nv), "bisect_new_subgradient: direction must be nonzero and finite");
  require(eps > 0.0, "bisect_new_subgradient: eps must be positive");
  const double f0 = fx ? *fx : oracle.eval(x);
  const Vector dir = v / nv;
  const double cut = -c * nv * nv;
  double a = 0.0;
  double b = eps;
  for (int it = 0; it < max_iters; ++it) {
    const double m = 0.5 * (a + b);
    Vector y = ball_point(x, dir, m, eps);
    Vector xi = oracle.subgradient(y);
    if (xi.dot(v) > cut) return {std::move(y), std::move(xi)};
    const double h = oracle.eval(y) - f0 + c * m * nv;
    if (h > 0.0) {
      b = m;
    } else {
      a = m;
    }
  }
  fail(ErrorCode::EnrichmentFailure,
       "bisection found no cutting subgradient in " + std::to_string(max_iters) + " steps");
}

ApproxResult build_sufficient_approx(Oracle& oracle, const Vector& x, double eps, double delta, double c,
                                     const ApproxInit& init, const ApproxCaps& caps, const GradientBundle* warm,
                                     std::optional<double> fx) {
  require(eps > 0.0, "build_sufficient_approx: eps must be positive");
  require(delta >= 0.0, "build_sufficient_approx: delta must be nonnegative");
  require(c > 0.0 && c < 1.0, "build_sufficient_approx: c must lie in (0, 1)");
  require(static_cast<std::size_t>(x.size()) == oracle.dim(), "build_sufficient_approx: dimension mismatch");

  ApproxResult out;
  GradientBundle& b = out.bundle;
  b.center = x;
  b.epsilon = eps;
  const double f0 = fx ? *fx : oracle.eval(x);

  if (warm != nullptr) {
    for (const auto& e : warm->entries) {
      if ((e.point - x).norm() <= eps) b.entries.push_back(e);
    }
  }
  switch (init.mode) {
    case ApproxMode::Exact: {
      if (!oracle.objective().has_exact_goldstein()) {
        fail(ErrorCode::Capability, oracle.objective().name() + " has no closed-form eps-subdifferential");
      }
      for (auto& w : oracle.exact_goldstein(x, eps)) b.entries.push_back({std::move(w.point), std::move(w.gradient)});
      break;
    }
    case ApproxMode::Deterministic:
      b.entries.push_back({x, oracle.subgradient(x)});
      break;
    case ApproxMode::Random: {
      b.entries.push_back({x, oracle.subgradient(x)});
      const int count = init.sample_count > 0 ? init.sample_count : static_cast<int>(2 * oracle.dim());
      auto s = sample_gradients(oracle, x, eps, count, init.seed);
      for (auto& e : s.entries) b.entries.push_back(std::move(e));
      break;
    }
  }

  std::vector<double> previous;
  while (true) {
    const std::vector<Vector> grads = b.gradients();
    try {
      out.min_norm = min_norm_point(grads, default_min_norm_tolerance(grads), previous, kDefaultRelativeGap);
    } catch (const MinNormFailure& e) {
      out.min_norm = e.best();
      out.status = {ApproxKind::Failed, e.best().v, e.best().v.norm(), delta, e.what()};
      return out;
    }
    out.norm_history.push_back(out.min_norm.v.norm());
    out.status = sufficient_check(oracle, x, eps, c, out.min_norm.v, delta, f0);
    if (out.status.kind != ApproxKind::Enriching) return out;

    if (init.mode == ApproxMode::Exact) {
      out.status.kind = ApproxKind::Failed;
      out.status.diagnostic = "exact eps-subdifferential gave no sufficient decrease; " + describe(b, out.status.norm_v);
      return out;
    }
    if (out.enrichments >= caps.max_rounds) {
      out.status.kind = ApproxKind::Failed;
      out.status.diagnostic = "enrichment cap reached; " + describe(b, out.status.norm_v);
      return out;
    }
    try {
      b.entries.push_back(bisect_new_subgradient(oracle, x, out.min_norm.v, eps, c, caps.bisection_iters, f0));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EnrichmentFailure) throw;
      out.status.kind = ApproxKind::Failed;
      out.status.diagnostic = std::string(e.what()) + "; " + describe(b, out.status.norm_v);
      return out;
    }
    ++out.enrichments;
    previous = out.min_norm.coefficients;
  }
}

}  // namespace nsd
