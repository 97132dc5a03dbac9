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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsd/goldstein.hpp"
#include "nsd/minnorm.hpp"
#include "nsd/rng.hpp"
#include "nsd/test_functions.hpp"

using namespace nsd;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double e : v) x(k++) = e;
  return x;
}

void check_bundle_sound(const GradientBundle& b) {
  for (const auto& e : b.entries) CHECK((e.point - b.center).norm() <= b.epsilon);
  CHECK(b.certified());
}

}  // namespace

TEST_CASE("sampling examples") {
  auto f = make_objective("abs");
  Oracle o(*f);
  CHECK(sample_gradients(o, vec({1.0}), 0.5, 0, 1).entries.empty());
  for (std::uint64_t seed : {1, 2, 3}) {
    for (const auto& e : sample_gradients(o, vec({1.0}), 0.5, 10, seed).entries) CHECK(e.gradient(0) == 1.0);
  }
  bool neg = false, pos = false;
  const auto b = sample_gradients(o, vec({0.3}), 0.5, 10000, 4);
  for (const auto& e : b.entries) {
    neg = neg || e.gradient(0) == -1.0;
    pos = pos || e.gradient(0) == 1.0;
  }
  CHECK(neg);
  CHECK(pos);
  check_bundle_sound(b);
}

TEST_CASE("sufficient check examples") {
  auto f = make_objective("abs");
  Oracle o(*f);
  CHECK(sufficient_check(o, vec({1.0}), 0.5, 0.9, vec({-1.0}), 1e-6).kind == ApproxKind::SufficientDescent);
  CHECK(sufficient_check(o, vec({0.3}), 0.5, 0.9, vec({-1.0}), 1e-6).kind == ApproxKind::Enriching);
  CHECK(sufficient_check(o, vec({0.3}), 0.5, 0.9, vec({0.0}), 0.0).kind == ApproxKind::Critical);
}

TEST_CASE("bisection on abs finds the other slope") {
  auto f = make_objective("abs");
  Oracle o(*f);
  const auto e = bisect_new_subgradient(o, vec({0.3}), vec({-1.0}), 0.5, 0.9);
  CHECK(e.point(0) < 0.0);
  CHECK(e.point(0) > -0.2);
  CHECK(e.gradient(0) == -1.0);
  CHECK(e.gradient.dot(vec({-1.0})) > -0.9);
}

TEST_CASE("bisection on crescent: cut inequality on both sides of the circle") {
  auto f = make_objective("crescent");
  for (const Vector& x : {vec({0.0, -0.3}), vec({0.0, 0.3})}) {
    Oracle o(*f);
    const auto act = f->active_gradients(x, 0.0);
    REQUIRE(act.size() == 1);
    const std::vector<Vector> w{f->subgradient(x)};
    const Vector v = min_norm_point(w).v;
    REQUIRE(sufficient_check(o, x, 0.5, 0.9, v, 1e-6).kind == ApproxKind::Enriching);
    const auto e = bisect_new_subgradient(o, x, v, 0.5, 0.9);
    CHECK((e.point - x).norm() <= 0.5);
    CHECK(e.gradient.dot(v) > -0.9 * v.squaredNorm());
    // The cut gradient belongs to a selection active at the returned point.
    bool matches = false;
    for (const auto& a : f->active_gradients(e.point, 0.0)) matches = matches || a.gradient == e.gradient;
    CHECK(matches);
  }
}

TEST_CASE("bisection precondition") {
  auto f = make_objective("abs");
  Oracle o(*f);
  CHECK_THROWS_AS(bisect_new_subgradient(o, vec({1.0}), vec({-1.0}), 0.5, 0.9), Error);
}

TEST_CASE("build_sufficient_approx examples") {
  auto f = make_objective("abs");
  {
    Oracle o(*f);
    const auto r = build_sufficient_approx(o, vec({1.0}), 0.5, 1e-6, 0.9, {ApproxMode::Deterministic, 0, 0});
    CHECK(r.status.kind == ApproxKind::SufficientDescent);
    CHECK(r.status.v(0) == -1.0);
    CHECK(r.enrichments == 0);
  }
  {
    Oracle o(*f);
    const auto r = build_sufficient_approx(o, vec({0.3}), 0.5, 1e-6, 0.9, {ApproxMode::Deterministic, 0, 0});
    CHECK(r.status.kind == ApproxKind::Critical);
    CHECK(r.status.norm_v == 0.0);
  }
  auto pm = make_objective("powmax:1");
  for (double kappa : {0.5, 0.1, 0.9}) {
    Oracle o(*pm);
    const auto r = build_sufficient_approx(o, vec({kappa, 0.0}), kappa / std::numbers::sqrt2, 0.0, 0.9,
                                           {ApproxMode::Exact, 0, 0});
    CHECK(r.status.kind == ApproxKind::Critical);
  }
}

TEST_CASE("property: bundles are sound, descent holds, hull norms shrink") {
  const char* ids[] = {"crescent", "maxq:5", "powmax:3", "nesterov:10", "cubicmax4", "abs"};
  CounterRng rng(31);
  for (const char* id : ids) {
    auto f = make_objective(id);
    const auto n = static_cast<Eigen::Index>(f->dim());
    CAPTURE(id);
    for (int s = 0; s < 40; ++s) {
      Vector x(n);
      for (auto& e : x) e = -1.5 + 3.0 * rng.uniform();
      const double eps = std::pow(10.0, -3.0 * rng.uniform());
      const double delta = 1e-3 * rng.uniform();
      const ApproxMode mode = s % 2 ? ApproxMode::Random : ApproxMode::Deterministic;
      Oracle o(*f);
      const auto r = build_sufficient_approx(o, x, eps, delta, 0.9, {mode, 0, rng.next_u64()});
      check_bundle_sound(r.bundle);
      for (std::size_t k = 1; k < r.norm_history.size(); ++k) {
        CHECK(r.norm_history[k] <= r.norm_history[k - 1] + 1e-10);
      }
      if (r.status.kind == ApproxKind::SufficientDescent) {
        const Vector& v = r.status.v;
        const double nv = v.norm();
        CHECK(f->eval(step_point(x, eps / nv, v)) <= f->eval(x) - 0.9 * eps * nv + 1e-12);
      } else if (r.status.kind == ApproxKind::Critical) {
        CHECK(r.status.norm_v <= delta);
      }
    }
  }
}

TEST_CASE("property: every bisection gradient is a cut") {
  const char* ids[] = {"crescent", "maxq:4", "powmax:2", "cubicmax4"};
  CounterRng rng(32);
  int tried = 0;
  for (const char* id : ids) {
    auto f = make_objective(id);
    const auto n = static_cast<Eigen::Index>(f->dim());
    for (int s = 0; s < 200; ++s) {
      Vector x(n);
      for (auto& e : x) e = -1.0 + 2.0 * rng.uniform();
      const double eps = 0.5 * rng.uniform() + 1e-3;
      Oracle o(*f);
      const Vector v = -f->subgradient(x);
      if (v.norm() == 0.0 || sufficient_check(o, x, eps, 0.9, v, 0.0).kind != ApproxKind::Enriching) continue;
      const auto e = bisect_new_subgradient(o, x, v, eps, 0.9);
      CHECK(e.gradient.dot(v) > -0.9 * v.squaredNorm());
      CHECK((e.point - x).norm() <= eps);
      ++tried;
    }
  }
  CHECK(tried > 50);
}

TEST_CASE("oracle counts calls") {
  auto f = make_objective("abs");
  Oracle o(*f);
  o.eval(vec({1.0}));
  o.subgradient(vec({1.0}));
  CHECK(o.calls() == 2);
  const auto w = o.exact_goldstein(vec({0.0}), 0.5);
  CHECK(o.calls() == 2 + w.size());
}
