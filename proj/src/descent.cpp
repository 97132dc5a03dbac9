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

#include "nsd/descent.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "nsd/rng.hpp"

namespace nsd {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Schedule Schedule::geometric(double a, double kappa) { return {Kind::Geometric, a, kappa, {}}; }
Schedule Schedule::super_geometric(double a, double kappa) { return {Kind::SuperGeometric, a, kappa, {}}; }
Schedule Schedule::constant(double a) { return {Kind::Constant, a, 0.0, {}}; }
Schedule Schedule::zero() { return {Kind::Zero, 0.0, 0.0, {}}; }
Schedule Schedule::table(std::vector<double> values) { return {Kind::Table, 0.0, 0.0, std::move(values)}; }

std::optional<double> Schedule::at(int j) const {
  require(j >= 1, "schedule index starts at 1");
  switch (kind) {
    case Kind::Geometric: return a * std::pow(kappa, j);
    case Kind::SuperGeometric: return a * std::pow(kappa, static_cast<double>(j) * j);
    case Kind::Constant: return a;
    case Kind::Zero: return 0.0;
    case Kind::Table:
      if (static_cast<std::size_t>(j) > values.size()) return std::nullopt;
      return values[static_cast<std::size_t>(j - 1)];
  }
  return std::nullopt;
}

void Schedule::validate() const {
  switch (kind) {
    case Kind::Geometric:
    case Kind::SuperGeometric:
      if (!(a > 0.0) || !(kappa > 0.0 && kappa < 1.0)) {
        fail(ErrorCode::Configuration, "geometric schedules need a > 0 and 0 < kappa < 1");
      }
      break;
    case Kind::Constant:
      if (!(a >= 0.0) || !std::isfinite(a)) fail(ErrorCode::Configuration, "constant schedule must be >= 0");
      break;
    case Kind::Zero:
      break;
    case Kind::Table:
      for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::Configuration, "table schedule entries must be >= 0");
      }
      break;
  }
}

const char* to_string(Schedule::Kind kind) noexcept {
  switch (kind) {
    case Schedule::Kind::Geometric: return "geometric";
    case Schedule::Kind::SuperGeometric: return "supergeometric";
    case Schedule::Kind::Constant: return "constant";
    case Schedule::Kind::Zero: return "zero";
    case Schedule::Kind::Table: return "table";
  }
  return "?";
}

const char* to_string(TerminalStatus status) noexcept {
  switch (status) {
    case TerminalStatus::ReachedJMax: return "reached_j_max";
    case TerminalStatus::ReachedLMax: return "reached_l_max";
    case TerminalStatus::EpsBelowMin: return "eps_below_min";
    case TerminalStatus::ScheduleExhausted: return "schedule_exhausted";
    case TerminalStatus::AbortedApproxFailure: return "aborted_approx_failure";
  }
  return "?";
}

double expand_step(Oracle& oracle, const Vector& x, const Vector& v, double eps, double c, int max_doublings,
                   std::optional<double> fx) {
  const double nv = v.norm();
  require(nv > 0.0 && std::isfinite(nv), "expand_step: direction must be nonzero and finite");
  require(max_doublings >= 0, "expand_step: negative max_doublings");
  const double f0 = fx ? *fx : oracle.eval(x);
  double t = eps / nv;
  for (int k = 0; k < max_doublings; ++k) {
    const double trial = 2.0 * t;
    if (!(oracle.eval(step_point(x, trial, v)) <= f0 - c * trial * nv * nv)) break;
    t = trial;
  }
  return t;
}

DescentTrace run_descent(const Objective& f, const Vector& x0, const Schedule& eps_schedule,
                         const Schedule& delta_schedule, const DescentConfig& config) {
  if (!(config.c > 0.0 && config.c < 1.0)) fail(ErrorCode::Configuration, "c must lie in (0, 1)");
  if (static_cast<std::size_t>(x0.size()) != f.dim()) fail(ErrorCode::DimensionMismatch, "x0 has the wrong dimension");
  eps_schedule.validate();
  delta_schedule.validate();

  Oracle oracle(f);
  DescentTrace trace;
  Vector x = x0;
  double fx = oracle.eval(x);
  int j = 1;
  int i = 0;
  long l = 0;
  std::optional<GradientBundle> carry;

  while (true) {
    if (j > config.stop.j_max) {
      trace.status = TerminalStatus::ReachedJMax;
      break;
    }
    const auto eps = eps_schedule.at(j);
    const auto delta = delta_schedule.at(j);
    if (!eps || !delta) {
      trace.status = TerminalStatus::ScheduleExhausted;
      break;
    }
    if (*eps < config.stop.eps_min) {
      trace.status = TerminalStatus::EpsBelowMin;
      break;
    }
    if (l >= config.stop.l_max) {
      trace.status = TerminalStatus::ReachedLMax;
      break;
    }
    ++l;

    const ApproxConfig& ac = config.approx;
    ApproxInit init{ac.mode, ac.sample_count, derive_seed(ac.seed, static_cast<std::uint64_t>(l), 0)};
    const GradientBundle* warm = ac.warm_start && i == 0 && carry ? &*carry : nullptr;
    ApproxResult res = build_sufficient_approx(oracle, x, *eps, *delta, config.c, init, ac.caps, warm, fx);
    if (res.status.kind == ApproxKind::Failed && ac.mode != ApproxMode::Exact) {
      ApproxInit retry{ApproxMode::Random, ac.sample_count, derive_seed(ac.seed, static_cast<std::uint64_t>(l), 1)};
      if (ac.mode == ApproxMode::Deterministic) retry.sample_count = 0;
      res = build_sufficient_approx(oracle, x, *eps, *delta, config.c, retry, ac.caps, warm, fx);
    }

    InnerRecord rec;
    rec.l = l;
    rec.j = j;
    rec.i = i;
    rec.x = x;
    rec.f = fx;
    rec.norm_v = res.status.norm_v;
    rec.eps = *eps;
    rec.delta = *delta;
    rec.bundle_size = res.bundle.entries.size();
    rec.kind = res.status.kind;

    if (res.status.kind == ApproxKind::Failed) {
      rec.oracle_calls = oracle.calls();
      trace.inner.push_back(std::move(rec));
      trace.status = TerminalStatus::AbortedApproxFailure;
      trace.diagnostic = res.status.diagnostic;
      break;
    }
    if (res.status.kind == ApproxKind::Critical) {
      rec.oracle_calls = oracle.calls();
      trace.inner.push_back(std::move(rec));
      trace.outer.push_back({j, x, i, *eps, *delta, res.status.norm_v});
      if (ac.warm_start) carry = std::move(res.bundle);
      ++j;
      i = 0;
      continue;
    }

    const Vector& v = res.min_norm.v;
    const double t = expand_step(oracle, x, v, *eps, config.c, config.step.max_doublings, fx);
    x = step_point(x, t, v);
    fx = oracle.eval(x);
    rec.t = t;
    rec.oracle_calls = oracle.calls();
    trace.inner.push_back(std::move(rec));
    ++i;
  }
  trace.oracle_calls = oracle.calls();
  return trace;
}

std::vector<std::string> trace_columns(std::size_t n) {
  std::vector<std::string> cols{"l", "j", "i", "f", "norm_v", "t", "eps_j", "delta_j", "bundle_size", "oracle_calls"};
  for (std::size_t k = 1; k <= n; ++k) cols.push_back("x_" + std::to_string(k));
  return cols;
}

void write_trace_csv(std::ostream& out, const DescentTrace& trace) {
  const std::size_t n = trace.inner.empty() ? 0 : static_cast<std::size_t>(trace.inner.front().x.size());
  const auto cols = trace_columns(n);
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
  for (const auto& r : trace.inner) {
    out << r.l << ',' << r.j << ',' << r.i << ',' << fmt(r.f) << ',' << fmt(r.norm_v) << ',' << fmt(r.t) << ','
        << fmt(r.eps) << ',' << fmt(r.delta) << ',' << r.bundle_size << ',' << r.oracle_calls;
    for (Eigen::Index k = 0; k < r.x.size(); ++k) out << ',' << fmt(r.x(k));
    out << '\n';
  }
}

}  // namespace nsd
