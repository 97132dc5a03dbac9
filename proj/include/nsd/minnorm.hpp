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

#ifndef NSD_MINNORM_HPP
#define NSD_MINNORM_HPP

#include <span>
#include <vector>

#include "nsd/error.hpp"
#include "nsd/objective.hpp"

namespace nsd {

/// Solution of min { ||xi||^2 : xi in -conv(W) }.
///
/// `v` is the negated min-norm point of conv(W), i.e. the descent direction,
/// and `coefficients[i]` the convex weight of W[i]. `gap` is Wolfe's
/// optimality certificate ||v||^2 - min_i <-v, W[i]>, which is >= 0 up to
/// rounding and vanishes exactly at the optimum.
struct MinNormResult {
  Vector v;
  std::vector<double> coefficients;
  double gap = 0.0;
  int iterations = 0;
};

class MinNormFailure : public Error {
 public:
  MinNormFailure(const std::string& what, MinNormResult best)
      : Error(ErrorCode::SolverFailure, what), best_(std::move(best)) {}
  const MinNormResult& best() const noexcept { return best_; }

 private:
  MinNormResult best_;
};

/// Roundoff floor for the gap, (64 u max ||w||)^2 with u the unit roundoff.
double default_min_norm_tolerance(std::span<const Vector> vectors);

/// Relative gap target of the default solve: gap <= 1e-10 ||v||^2, i.e. the
/// returned point is within about 1e-5 ||v|| of the optimum.
inline constexpr double kDefaultRelativeGap = 1e-10;

/// Wolfe's min-norm-point method over a finite set. Stops once
/// gap <= max(tol, rel_tol ||v||^2). Deterministic in the order of `vectors`.
/// Throws MinNormFailure after 100 * k iterations.
///
/// `warm` holds convex weights of a previous solve over a prefix of
/// `vectors`; enrichment appends one gradient at a time, so the previous
/// corral is an almost optimal start.
MinNormResult min_norm_point(std::span<const Vector> vectors, double tol, std::span<const double> warm = {},
                             double rel_tol = 0.0);

/// Default solve: roundoff floor plus kDefaultRelativeGap.
MinNormResult min_norm_point(std::span<const Vector> vectors);

/// Test oracle: the best convex combination on the simplex grid with
/// `grid_steps` subdivisions, negated. Needs k <= 5 and grid_steps >= 10.
Vector min_norm_bruteforce(std::span<const Vector> vectors, int grid_steps);

/// Test oracle: enumerates every subset of W, solves the affine min-norm
/// problem of each through its bordered Gram system and keeps the feasible
/// candidate of least norm. Exact up to rounding; needs k <= 12.
Vector min_norm_enumerate(std::span<const Vector> vectors);

}  // namespace nsd

#endif  // NSD_MINNORM_HPP
