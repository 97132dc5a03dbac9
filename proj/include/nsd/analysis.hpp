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

#ifndef NSD_ANALYSIS_HPP
#define NSD_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsd/descent.hpp"
#include "nsd/objective.hpp"

namespace nsd {

// ---- growth order -------------------------------------------------------

struct GrowthFit {
  double p_hat = 0.0;
  double beta_hat = 0.0;
  double residual = 0.0;  // max relative violation of f - f* >= beta_hat r^p_hat
  int sample_count = 0;
  // False when f - f* vanishes at some r > 0 or the local slope keeps
  // growing as the radius shrinks.
  bool finite_order = true;
  double slope_inner = 0.0;  // slope over the smaller half of the radii
  double slope_outer = 0.0;  // slope over the larger half
};

/// Samples the ball of `radius` around x_star with log-uniform radii in
/// [1e-3 radius, radius]. Half of the directions are uniform; the other half
/// lie in the subspace on which all active selection gradients at x_star
/// agree (where first-order growth cancels). The log-log slope of the
/// per-shell lower envelope gives p_hat; beta_hat is the least ratio
/// (f - f*) / r^round(p_hat) after a local refinement of the best samples.
/// Throws NotAMinimum when some sample has f < f*.
GrowthFit fit_growth_order(const Objective& f, const Vector& x_star, double radius, int samples, std::uint64_t seed,
                           std::optional<double> f_star = std::nullopt);

// ---- directional scans --------------------------------------------------

/// `count` log-spaced values from hi down to lo.
std::vector<double> log_grid(double lo, double hi, int count);

struct ScanOptions {
  std::vector<double> t_grid = log_grid(1e-8, 1e-1, 64);
  double cone_radius = 1e-2;
  int dir_samples = 32;
  std::uint64_t seed = 0;
};

/// Minimum over the grid of (f(x* + t d') - f(x*)) / t^p, d' unit vectors
/// with ||d' - d|| <= cone_radius (before normalization). The first sample
/// is d itself. A grid minimum only bounds the liminf from above.
double dini_lower(const Objective& f, const Vector& x_star, const Vector& d, int p, const ScanOptions& opt = {});

struct RatioScan {
  Vector direction;
  std::vector<double> t_grid;
  double cone_radius = 0.0;
  double min_ratio = 0.0;
  double argmin_t = 0.0;
  Vector argmin_direction;
  std::size_t evaluations = 0;
};

/// Minimum over the grid of <xi, d'> / t^(p-1), xi = subgradient(x* + t d').
RatioScan semismooth_ratio_scan(const Objective& f, const Vector& x_star, const Vector& d, int p,
                                const ScanOptions& opt = {});

/// The same ratio at explicit points y = x* + t d' with t = ||y - x*||.
std::vector<double> semismooth_ratios_at(const Objective& f, const Vector& x_star, std::span<const Vector> points,
                                         int p);

// ---- selection convexity ------------------------------------------------

struct SelectionConvexity {
  std::size_t index = 0;
  int directions_in_cone = 0;
  std::vector<double> min_term;  // min over cone directions of d^(k) f_i(x*)(d)^k, k = 2..p
  double worst = 0.0;            // min over k of min_term
  bool violates = false;         // worst < -cone_tol
};

struct ConvexityReport {
  bool skipped = false;
  std::string reason;
  std::vector<SelectionConvexity> selections;
};

/// k-th derivative of s -> f_i(x + s d) at 0 by a central stencil with step
/// h = 1e-2 max(1, ||x||) and one Richardson extrapolation, k in 2..4.
double selection_directional_derivative(const Objective& f, std::size_t index, const Vector& x, const Vector& d,
                                        int k);

/// Checks d^(k) f_i(x*)(d)^k >= 0 for k = 2..p on random unit directions d for
/// which selection i is exactly active at x* + 1e-4 max(1, ||x*||) d. Skipped for
/// p = 1, where the condition is empty.
ConvexityReport selection_convexity_check(const Objective& f, const Vector& x_star, int p, int dir_samples,
                                          double cone_tol = 1e-6, std::uint64_t seed = 0);

// ---- rate bounds --------------------------------------------------------

enum class Binding { EpsTerm, DeltaTerm };

const char* to_string(Binding b) noexcept;

struct RateEntry {
  int j = 0;
  double distance = 0.0;
  double bound = 0.0;  // B_j
  double ratio = 0.0;  // distance / B_j
  Binding binding = Binding::EpsTerm;
};

struct RateReport {
  double M_fit = 0.0;
  std::vector<RateEntry> entries;  // audited j only
  std::vector<int> violations;     // j with ratio > M_ref (1 + tol)
  std::optional<int> crossover_j;  // first audited j whose binding term differs from its predecessor
};

struct RateOptions {
  int transient_skip = 5;              // audit j >= transient_skip
  std::optional<int> j_last;           // and j <= j_last
  std::optional<double> reference_M;   // defaults to M_fit
  double tol = 1e-10;
};

/// B_j = eps_j for p = 1 and max(eps_j^(1/p), delta_j^(1/(p-1))) for p >= 2;
/// M_fit = max ||x^j - x*|| / B_j over the audited stages.
RateReport check_rate_bound(std::span<const OuterRecord> outer, const Vector& x_star, int p,
                            const RateOptions& opt = {});

/// l -> L r(l / (N_bar + 1) - 1).
std::function<double(double)> f_rate_bound(std::function<double(double)> r, int N_bar, double L);

// ---- sequences ----------------------------------------------------------

enum class RateClass { Sublinear, Linear, Superlinear };

const char* to_string(RateClass c) noexcept;

struct RateClassification {
  RateClass kind = RateClass::Linear;
  double order = 1.0;  // q
  double rate = 0.0;   // mu
  bool unreliable = false;
};

/// Classifies a positive sequence from its successive ratios a_{j+1}/a_j and
/// the order estimates log(a_{j+2}/a_{j+1}) / log(a_{j+1}/a_j).
RateClassification rate_classify(std::span<const double> seq);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Fit of log(seq_j) against j.
LineFit log_linear_fit(std::span<const double> seq);

}  // namespace nsd

#endif  // NSD_ANALYSIS_HPP
