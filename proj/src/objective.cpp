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

#include "nsd/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsd/error.hpp"

namespace nsd {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ContractViolation: return "contract violation";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::Capability: return "unsupported capability";
    case ErrorCode::SolverFailure: return "solver failure";
    case ErrorCode::EnrichmentFailure: return "enrichment failure";
    case ErrorCode::NotAMinimum: return "not a minimum";
    case ErrorCode::Configuration: return "configuration error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown";
}

void Objective::check_dim(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    fail(ErrorCode::DimensionMismatch, name() + ": expected dimension " + std::to_string(dim()) +
                                           ", got " + std::to_string(x.size()));
  }
  if (!x.allFinite()) fail(ErrorCode::ContractViolation, name() + ": point has non-finite entries");
}

double Objective::eval(const Vector& x) const {
  check_dim(x);
  return value(x);
}

Vector Objective::subgradient(const Vector& x) const {
  check_dim(x);
  return gradient(x);
}

double Objective::selection_value(std::size_t index, const Vector& x) const {
  check_dim(x);
  if (index < 1 || index > selection_count()) {
    fail(ErrorCode::Capability, name() + ": no selection function " + std::to_string(index));
  }
  return selection_value_impl(index, x);
}

Vector Objective::selection_gradient(std::size_t index, const Vector& x) const {
  check_dim(x);
  if (index < 1 || index > selection_count()) {
    fail(ErrorCode::Capability, name() + ": no selection function " + std::to_string(index));
  }
  return selection_gradient_impl(index, x);
}

double Objective::default_activity_tolerance(double fx) {
  return 1e-12 * std::max(1.0, std::abs(fx));
}

std::vector<ActiveGradient> Objective::active_gradients(const Vector& x,
                                                        std::optional<double> tol) const {
  check_dim(x);
  if (!is_piecewise()) fail(ErrorCode::Capability, name() + " has no selection functions");
  const double fx = value(x);
  const double t = tol.value_or(default_activity_tolerance(fx));
  require(t >= 0.0, "activity tolerance must be nonnegative");
  std::vector<ActiveGradient> out;
  for (std::size_t i = 1; i <= selection_count(); ++i) {
    if (fx - selection_value_impl(i, x) <= t) out.push_back({i, selection_gradient_impl(i, x)});
  }
  if (out.empty()) fail(ErrorCode::ContractViolation, name() + ": empty active set");
  return out;
}

std::vector<Witness> Objective::exact_goldstein(const Vector& x, double eps) const {
  check_dim(x);
  require(eps >= 0.0, "exact_goldstein: eps must be nonnegative");
  if (!has_exact_goldstein()) {
    fail(ErrorCode::Capability, name() + " has no closed-form Goldstein subdifferential");
  }
  return exact_goldstein_impl(x, eps);
}

Vector Objective::gradient(const Vector& x) const {
  if (!is_piecewise()) fail(ErrorCode::Capability, name() + " must override gradient()");
  const double fx = value(x);
  for (std::size_t i = 1; i <= selection_count(); ++i) {
    if (selection_value_impl(i, x) == fx) return selection_gradient_impl(i, x);
  }
  // value() is not the max of the selections; fall back to the closest one.
  std::size_t best = 1;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= selection_count(); ++i) {
    const double d = std::abs(fx - selection_value_impl(i, x));
    if (d < gap) {
      gap = d;
      best = i;
    }
  }
  return selection_gradient_impl(best, x);
}

double Objective::selection_value_impl(std::size_t, const Vector&) const {
  fail(ErrorCode::Capability, name() + " has no selection functions");
}

Vector Objective::selection_gradient_impl(std::size_t, const Vector&) const {
  fail(ErrorCode::Capability, name() + " has no selection functions");
}

std::vector<Witness> Objective::exact_goldstein_impl(const Vector&, double) const {
  fail(ErrorCode::Capability, name() + " has no closed-form Goldstein subdifferential");
}

double MaxOfSelections::value(const Vector& x) const {
  double best = selection_value_impl(1, x);
  for (std::size_t i = 2; i <= selection_count(); ++i) best = std::max(best, selection_value_impl(i, x));
  return best;
}

Interval exact_goldstein_abs(double x, double eps) {
  require(eps >= 0.0, "exact_goldstein_abs: eps must be nonnegative");
  require(std::isfinite(x) && std::isfinite(eps), "exact_goldstein_abs: non-finite input");
  if (std::abs(x) <= eps) return {-1.0, 1.0};
  const double s = x > 0.0 ? 1.0 : -1.0;
  return {s, s};
}

}  // namespace nsd
