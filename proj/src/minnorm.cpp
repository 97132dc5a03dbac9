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

#include "nsd/minnorm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsd {
namespace {

constexpr double kRoundoff = std::numeric_limits<double>::epsilon();

double max_squared_norm(std::span<const Vector> vectors) {
  double s = 0.0;
  for (const auto& w : vectors) s = std::max(s, w.squaredNorm());
  return s;
}

void check_input(std::span<const Vector> vectors) {
  require(!vectors.empty(), "min-norm: empty gradient set");
  const auto n = vectors.front().size();
  require(n > 0, "min-norm: zero-dimensional vectors");
  for (const auto& w : vectors) {
    require(w.size() == n, "min-norm: vectors of mixed dimension");
    require(w.allFinite(), "min-norm: non-finite vector");
  }
}

// Weights of the min-norm point of the affine hull of points[idx], summing
// to one. Rank-revealing QR on the difference matrix gives the minimum-norm
// least-squares answer when the corral is (numerically) affinely dependent.
std::vector<double> affine_weights(const std::vector<Vector>& points, const std::vector<std::size_t>& idx) {
  const std::size_t m = idx.size();
  if (m == 1) return {1.0};
  const Vector& base = points[idx[0]];
  Eigen::MatrixXd diff(base.size(), static_cast<Eigen::Index>(m - 1));
  for (std::size_t i = 1; i < m; ++i) diff.col(static_cast<Eigen::Index>(i - 1)) = points[idx[i]] - base;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(diff);
  const Vector beta = cod.solve(-base);
  std::vector<double> w(m);
  w[0] = 1.0 - beta.sum();
  for (std::size_t i = 1; i < m; ++i) w[i] = beta(static_cast<Eigen::Index>(i - 1));
  return w;
}

Vector combine(const std::vector<Vector>& points, const std::vector<std::size_t>& idx,
               const std::vector<double>& lambda) {
  Vector x = Vector::Zero(points[idx[0]].size());
  for (std::size_t i = 0; i < idx.size(); ++i) x += lambda[i] * points[idx[i]];
  return x;
}

}  // namespace

double default_min_norm_tolerance(std::span<const Vector> vectors) {
  const double floor = 64.0 * kRoundoff;
  return std::max(floor * floor * max_squared_norm(vectors), std::numeric_limits<double>::min());
}

MinNormResult min_norm_point(std::span<const Vector> vectors) {
  check_input(vectors);
  return min_norm_point(vectors, default_min_norm_tolerance(vectors), {}, kDefaultRelativeGap);
}

MinNormResult min_norm_point(std::span<const Vector> vectors, double tol, std::span<const double> warm,
                             double rel_tol) {
  check_input(vectors);
  require(warm.size() <= vectors.size(), "min-norm: warm start longer than the vector set");
  require(tol > 0.0, "min-norm: tolerance must be positive");
  const std::size_t k = vectors.size();
  const double scale2 = max_squared_norm(vectors);
  const double scale = std::sqrt(scale2);

  // Deduplicate; owner[i] is the unique point standing in for vectors[i].
  std::vector<Vector> points;
  std::vector<std::size_t> owner(k);
  const double dup_tol = 1e-14 * std::max(scale, std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t found = points.size();
    for (std::size_t u = 0; u < points.size(); ++u) {
      if ((points[u] - vectors[i]).lpNorm<Eigen::Infinity>() <= dup_tol) {
        found = u;
        break;
      }
    }
    if (found == points.size()) points.push_back(vectors[i]);
    owner[i] = found;
  }

  std::size_t start = 0;
  for (std::size_t u = 1; u < points.size(); ++u) {
    if (points[u].squaredNorm() < points[start].squaredNorm()) start = u;
  }
  std::vector<std::size_t> corral{start};
  std::vector<double> lambda{1.0};
  double warm_mass = 0.0;
  for (double w : warm) warm_mass += std::max(w, 0.0);
  if (warm_mass > 0.0) {
    corral.clear();
    lambda.clear();
    for (std::size_t i = 0; i < warm.size(); ++i) {
      if (!(warm[i] > 0.0)) continue;
      const auto it = std::find(corral.begin(), corral.end(), owner[i]);
      if (it == corral.end()) {
        corral.push_back(owner[i]);
        lambda.push_back(warm[i] / warm_mass);
      } else {
        lambda[static_cast<std::size_t>(it - corral.begin())] += warm[i] / warm_mass;
      }
    }
  }
  Vector x = combine(points, corral, lambda);

  const int cap = static_cast<int>(100 * k);
  int iterations = 0;
  const auto finish = [&](double gap) {
    MinNormResult r;
    r.v = -x;
    r.coefficients.assign(k, 0.0);
    for (std::size_t c = 0; c < corral.size(); ++c) {
      for (std::size_t i = 0; i < k; ++i) {
        if (owner[i] == corral[c]) {
          r.coefficients[i] = lambda[c];
          break;
        }
      }
    }
    r.gap = gap;
    r.iterations = iterations;
    return r;
  };
  const auto certificate = [&] {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& w : vectors) lo = std::min(lo, x.dot(w));
    return x.squaredNorm() - lo;
  };

  // Minor cycles: move to the affine minimizer of the corral, dropping
  // points whose weight would turn negative.
  const auto settle = [&] {
    while (true) {
      const std::vector<double> alpha = affine_weights(points, corral);
      if (*std::min_element(alpha.begin(), alpha.end()) > 0.0) {
        lambda = alpha;
        break;
      }
      if (++iterations > cap) {
        throw MinNormFailure("min-norm: iteration cap exceeded", finish(certificate()));
      }
      double theta = 1.0;
      std::size_t leaving = 0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] <= 0.0) {
          const double t = lambda[i] / (lambda[i] - alpha[i]);
          if (t < theta) {
            theta = t;
            leaving = i;
          }
        }
      }
      for (std::size_t i = 0; i < alpha.size(); ++i) lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha[i];
      lambda[leaving] = 0.0;
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (lambda[i] > 0.0) {
          keep_idx.push_back(corral[i]);
          keep_lambda.push_back(lambda[i]);
        }
      }
      corral = std::move(keep_idx);
      lambda = std::move(keep_lambda);
      double sum = 0.0;
      for (double l : lambda) sum += l;
      for (double& l : lambda) l /= sum;
    }
    x = combine(points, corral, lambda);
  };
  if (warm_mass > 0.0) settle();

  while (true) {
    if (++iterations > cap) {
      throw MinNormFailure("min-norm: iteration cap exceeded", finish(certificate()));
    }
    // At rounding level relative to the generators x is the origin; minor
    // cycles there only trade rounding noise.
    if (x.norm() <= 64.0 * kRoundoff * scale) break;
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < points.size(); ++u) {
      const double d = x.dot(points[u]);
      if (d < best) {
        best = d;
        j = u;
      }
    }
    const double gap = x.squaredNorm() - best;
    if (gap <= std::max(tol, rel_tol * x.squaredNorm())) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) {
      // No further progress is representable.
      if (gap <= std::max({tol, rel_tol * x.squaredNorm(), 64.0 * kRoundoff * scale2})) break;
      throw MinNormFailure("min-norm: stalled above tolerance", finish(certificate()));
    }
    corral.push_back(j);
    lambda.push_back(0.0);

    settle();
  }

  // A remainder at rounding level relative to the generators is the origin.
  if (x.norm() <= 64.0 * kRoundoff * scale) x.setZero();
  return finish(certificate());
}

Vector min_norm_bruteforce(std::span<const Vector> vectors, int grid_steps) {
  check_input(vectors);
  const std::size_t k = vectors.size();
  if (k > 5) fail(ErrorCode::Capability, "min_norm_bruteforce: at most 5 vectors");
  require(grid_steps >= 10, "min_norm_bruteforce: grid_steps must be >= 10");

  Vector best = vectors[0];
  double best_norm = std::numeric_limits<double>::infinity();
  const double h = 1.0 / grid_steps;
  // acc[pos] holds the partial sum over the first pos vectors; no
  // allocation inside the enumeration.
  std::vector<Vector> acc(k, Vector::Zero(vectors[0].size()));

  // Enumerate compositions c_0 + ... + c_{k-1} = grid_steps.
  const auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 2 == k) {
      // Last two weights: ||base + c h d||^2 is a quadratic in c.
      const Vector base = acc[pos] + (remaining * h) * vectors[pos + 1];
      const Vector d = h * (vectors[pos] - vectors[pos + 1]);
      const double b2 = base.squaredNorm(), bd = base.dot(d), d2 = d.squaredNorm();
      int best_c = -1;
      for (int c = 0; c <= remaining; ++c) {
        const double nrm = b2 + c * (2.0 * bd + c * d2);
        if (nrm < best_norm) {
          best_norm = nrm;
          best_c = c;
        }
      }
      if (best_c >= 0) best = base + best_c * d;
      return;
    }
    if (pos + 1 == k) {
      const double nrm = (acc[pos] + (remaining * h) * vectors[pos]).squaredNorm();
      if (nrm < best_norm) {
        best_norm = nrm;
        best = acc[pos] + (remaining * h) * vectors[pos];
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      acc[pos + 1].noalias() = acc[pos] + (c * h) * vectors[pos];
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, grid_steps);
  return -best;
}

Vector min_norm_enumerate(std::span<const Vector> vectors) {
  check_input(vectors);
  const std::size_t k = vectors.size();
  if (k > 12) fail(ErrorCode::Capability, "min_norm_enumerate: at most 12 vectors");
  Vector best;
  double best_norm = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) kkt(a, b) = vectors[idx[a]].dot(vectors[idx[b]]);
      kkt(a, m) = 1.0;
      kkt(m, a) = 1.0;
    }
    Vector rhs = Vector::Zero(m + 1);
    rhs(m) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Vector sol = lu.solve(rhs);
    if ((sol.head(m).array() < -1e-12).any()) continue;
    Vector p = Vector::Zero(vectors[0].size());
    for (Eigen::Index a = 0; a < m; ++a) p += sol(a) * vectors[idx[a]];
    const double nrm = p.squaredNorm();
    if (nrm < best_norm) {
      best_norm = nrm;
      best = p;
    }
  }
  return -best;
}

}  // namespace nsd
