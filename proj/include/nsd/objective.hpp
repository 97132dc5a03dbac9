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

#ifndef NSD_OBJECTIVE_HPP
#define NSD_OBJECTIVE_HPP

#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nsd {

using Vector = Eigen::VectorXd;

/// Known local minimizer of an objective. `order` and `beta` are empty when
/// the minimum has no finite growth order.
struct MinimumMetadata {
  Vector x_star;
  double f_star = 0.0;
  std::optional<int> order;
  std::optional<double> beta;
  double growth_radius = 1.0;
  double lipschitz = 1.0;
};

/// Gradient of selection `index` (1-based, f_1 ... f_m).
struct ActiveGradient {
  std::size_t index = 0;
  Vector gradient;
};

/// A subgradient together with a point where it is attained.
struct Witness {
  Vector point;
  Vector gradient;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Locally Lipschitz objective. Implementations are immutable; every method is
// a pure function of its arguments and may be called concurrently.
//
// Piecewise differentiable objectives expose selection functions through
// selection_count()/selection_value()/selection_gradient() with 1-based
// indices. subgradient() then returns the gradient of the lowest-index
// selection that is exactly active.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;

  double eval(const Vector& x) const;
  Vector subgradient(const Vector& x) const;

  bool is_piecewise() const { return selection_count() > 0; }
  virtual std::size_t selection_count() const { return 0; }
  double selection_value(std::size_t index, const Vector& x) const;
  Vector selection_gradient(std::size_t index, const Vector& x) const;

  /// Selections with f(x) - f_i(x) <= tol. Without `tol` the relative default
  /// 1e-12 * max(1, |f(x)|) is used. Throws Capability for non-piecewise
  /// objectives.
  std::vector<ActiveGradient> active_gradients(const Vector& x,
                                               std::optional<double> tol = std::nullopt) const;

  /// Closed-form Goldstein eps-subdifferential as the vertex set of a
  /// polytope, each vertex paired with a point of the eps-ball attaining it.
  virtual bool has_exact_goldstein() const { return false; }
  std::vector<Witness> exact_goldstein(const Vector& x, double eps) const;

  const std::optional<MinimumMetadata>& metadata() const { return metadata_; }

  static double default_activity_tolerance(double fx);

 protected:
  explicit Objective(std::optional<MinimumMetadata> metadata = std::nullopt)
      : metadata_(std::move(metadata)) {}

  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const;
  virtual double selection_value_impl(std::size_t index, const Vector& x) const;
  virtual Vector selection_gradient_impl(std::size_t index, const Vector& x) const;
  virtual std::vector<Witness> exact_goldstein_impl(const Vector& x, double eps) const;

  void check_dim(const Vector& x) const;

 private:
  std::optional<MinimumMetadata> metadata_;
};

/// Objective of the form f(x) = max_i f_i(x).
class MaxOfSelections : public Objective {
 protected:
  using Objective::Objective;
  double value(const Vector& x) const override;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// Exact Goldstein eps-subdifferential of |.| at x: [-1, 1] when |x| <= eps,
/// otherwise the degenerate interval {sign(x)}.
Interval exact_goldstein_abs(double x, double eps);

}  // namespace nsd

#endif  // NSD_OBJECTIVE_HPP
