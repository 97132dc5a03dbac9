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

#ifndef NSD_GOLDSTEIN_HPP
#define NSD_GOLDSTEIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsd/minnorm.hpp"
#include "nsd/objective.hpp"

namespace nsd {

/// Objective wrapper that counts every eval/subgradient call.
class Oracle {
 public:
  explicit Oracle(const Objective& f) : f_(&f) {}

  double eval(const Vector& x) {
    ++calls_;
    return f_->eval(x);
  }
  Vector subgradient(const Vector& x) {
    ++calls_;
    return f_->subgradient(x);
  }

  /// Closed-form eps-subdifferential; one call per returned witness.
  std::vector<Witness> exact_goldstein(const Vector& x, double eps) {
    auto w = f_->exact_goldstein(x, eps);
    calls_ += w.size();
    return w;
  }

  const Objective& objective() const { return *f_; }
  std::size_t dim() const { return f_->dim(); }
  std::uint64_t calls() const { return calls_; }

 private:
  const Objective* f_;
  std::uint64_t calls_ = 0;
};

struct BundleEntry {
  Vector point;
  Vector gradient;
};

/// Finite subset of the Goldstein eps-subdifferential at `center`. Every
/// entry's point lies in the closed eps-ball around the center.
struct GradientBundle {
  Vector center;
  double epsilon = 0.0;
  std::vector<BundleEntry> entries;

  std::vector<Vector> gradients() const;
  bool certified() const;
};

enum class ApproxKind { Critical, SufficientDescent, Enriching, Failed };

const char* to_string(ApproxKind kind) noexcept;

struct ApproxStatus {
  ApproxKind kind = ApproxKind::Failed;
  Vector v;
  double norm_v = 0.0;
  double delta = 0.0;
  std::string diagnostic;
};

/// x + t * v. Every trial point of the method goes through here so the
/// certified step and the accepted step are bit-identical.
Vector step_point(const Vector& x, double t, const Vector& v);

/// `count` gradients at points drawn uniformly from the closed eps-ball.
GradientBundle sample_gradients(Oracle& oracle, const Vector& x, double eps, int count, std::uint64_t seed);

/// Critical if ||v|| <= delta, SufficientDescent if
/// f(x + (eps/||v||) v) <= f(x) - c eps ||v||, Enriching otherwise.
ApproxStatus sufficient_check(Oracle& oracle, const Vector& x, double eps, double c, const Vector& v, double delta,
                              std::optional<double> fx = std::nullopt);

/// Bisection on h(t) = f(x + t v/||v||) - f(x) + c t ||v|| over [0, eps] for a
/// subgradient xi with <xi, v> > -c ||v||^2. Throws EnrichmentFailure after
/// `max_iters` midpoints.
BundleEntry bisect_new_subgradient(Oracle& oracle, const Vector& x, const Vector& v, double eps, double c,
                                   int max_iters = 60, std::optional<double> fx = std::nullopt);

enum class ApproxMode { Deterministic, Random, Exact };

const char* to_string(ApproxMode mode) noexcept;

struct ApproxInit {
  ApproxMode mode = ApproxMode::Deterministic;
  int sample_count = 0;  // Random mode; 0 means 2n
  std::uint64_t seed = 0;
};

struct ApproxCaps {
  int max_rounds = 50;
  int bisection_iters = 60;
};

struct ApproxResult {
  GradientBundle bundle;
  MinNormResult min_norm;
  ApproxStatus status;
  int enrichments = 0;
  std::vector<double> norm_history;  // ||v|| after every min-norm solve
};

/// Grows W until it is a sufficient approximation.
/// Entries of `warm` inside the new eps-ball are kept as part of W0.
ApproxResult build_sufficient_approx(Oracle& oracle, const Vector& x, double eps, double delta, double c,
                                     const ApproxInit& init, const ApproxCaps& caps = {},
                                     const GradientBundle* warm = nullptr,
                                     std::optional<double> fx = std::nullopt);

}  // namespace nsd

#endif  // NSD_GOLDSTEIN_HPP
