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

#include "nsd/error.hpp"
#include "nsd/rng.hpp"
#include "nsd/test_functions.hpp"

using namespace nsd;

namespace {

const char* const kIds[] = {"abs",       "crescent", "maxq:10", "nesterov:100", "powmax:1",
                            "powmax:3",  "cubicmax4", "ex3_1",  "ex3_2",        "ex3_3:2"};

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double e : v) x(k++) = e;
  return x;
}

Vector random_in_ball(CounterRng& rng, const Vector& center, double radius) {
  Vector d(center.size());
  for (auto& e : d) e = rng.normal();
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(center.size()));
  return center + r * d / d.norm();
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(make_objective("abs")->eval(vec({0.0})) == 0.0);
  CHECK(make_objective("crescent")->eval(vec({0.0, 0.0})) == 0.0);
  CHECK(make_objective("maxq:10")->eval(vec({1, 2, 3, 4, 5, -6, -7, -8, -9, -10})) == 100.0);
}

TEST_CASE("subgradient examples") {
  auto abs = make_objective("abs");
  CHECK(abs->subgradient(vec({1.0}))(0) == 1.0);
  CHECK(abs->subgradient(vec({0.0}))(0) == 1.0);
  auto e = make_objective("ex3_2");
  for (int j = 1; j <= 20; ++j) {
    CHECK(std::abs(e->subgradient(vec({1.0 / (2.0 * std::numbers::pi * j)}))(0)) <= 1e-12);
  }
}

TEST_CASE("active gradients examples") {
  auto a = make_objective("abs")->active_gradients(vec({0.0}), 0.0);
  REQUIRE(a.size() == 2);
  CHECK(a[0].index == 1);
  CHECK(a[0].gradient(0) == 1.0);
  CHECK(a[1].index == 2);
  CHECK(a[1].gradient(0) == -1.0);

  auto m = make_objective("maxq:2")->active_gradients(vec({3.0, 2.0}), 0.0);
  REQUIRE(m.size() == 1);
  CHECK(m[0].index == 1);
  CHECK(m[0].gradient.isApprox(vec({6.0, 0.0})));

  auto c = make_objective("crescent");
  for (double th : {0.3, 1.0, 2.0}) {
    const Vector x = vec({0.75 * std::cos(th), 0.75 * std::sin(th) + 0.75});
    auto act = c->active_gradients(x, 0.0);
    REQUIRE(act.size() == 1);
    CHECK(act[0].index == 2);
  }
}

TEST_CASE("exact Goldstein set of abs") {
  auto f = make_objective("abs");
  auto hull = [&](double x, double eps) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& w : f->exact_goldstein(vec({x}), eps)) {
      CHECK(std::abs(w.point(0) - x) <= eps);
      lo = std::min(lo, w.gradient(0));
      hi = std::max(hi, w.gradient(0));
    }
    return std::pair{lo, hi};
  };
  CHECK(hull(1.0, 0.5) == std::pair{1.0, 1.0});
  CHECK(hull(0.3, 0.5) == std::pair{-1.0, 1.0});
  CHECK(hull(0.0, 0.0) == std::pair{-1.0, 1.0});
}

TEST_CASE("bad ids and dimensions") {
  CHECK_THROWS_AS(make_objective("nosuch"), Error);
  CHECK_THROWS_AS(make_objective("maxq:0"), Error);
  auto f = make_objective("maxq:3");
  try {
    f->eval(vec({1.0}));
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(make_objective("abs")->selection_value(3, vec({0.0})), Error);
}

TEST_CASE("property: eval equals the value of the active selections") {
  CounterRng rng(11);
  for (const char* id : kIds) {
    auto f = make_objective(id);
    if (!f->is_piecewise()) continue;
    const Vector center = f->metadata() ? f->metadata()->x_star : Vector::Zero(static_cast<Eigen::Index>(f->dim()));
    for (int s = 0; s < 500; ++s) {
      const Vector x = random_in_ball(rng, center, 2.0);
      const double fx = f->eval(x);
      const auto act = f->active_gradients(x, 0.0);
      REQUIRE(!act.empty());
      for (const auto& a : act) CHECK(f->selection_value(a.index, x) == fx);
    }
  }
}

TEST_CASE("property: growth lower bound on the metadata ball") {
  CounterRng rng(12);
  for (const char* id : kIds) {
    auto f = make_objective(id);
    const auto& m = f->metadata();
    if (!m || !m->order || !m->beta) continue;
    CAPTURE(id);
    int bad = 0;
    for (int s = 0; s < 10000; ++s) {
      const Vector x = random_in_ball(rng, m->x_star, m->growth_radius);
      const double lower = m->f_star + *m->beta * std::pow((x - m->x_star).norm(), *m->order);
      if (f->eval(x) < lower - 1e-12) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("property: subgradient matches central differences at differentiable points") {
  CounterRng rng(13);
  for (const char* id : kIds) {
    auto f = make_objective(id);
    CAPTURE(id);
    const auto n = static_cast<Eigen::Index>(f->dim());
    int checked = 0, bad = 0;
    while (checked < 1000) {
      const Vector x = random_in_ball(rng, Vector::Zero(n), 2.0);
      // Keep a margin from kinks and from the oscillating region near 0.
      if (f->is_piecewise()) {
        const double fx = f->eval(x);
        if (f->active_gradients(x, 1e-4 * std::max(1.0, std::abs(fx))).size() != 1) continue;
      } else if (x.cwiseAbs().minCoeff() < 0.05) {
        continue;
      }
      const Vector g = f->subgradient(x);
      const double h = 1e-6;
      for (Eigen::Index i = 0; i < n; ++i) {
        Vector xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const double fd = (f->eval(xp) - f->eval(xm)) / (2 * h);
        if (std::abs(fd - g(i)) > 1e-5) ++bad;
      }
      ++checked;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("PowMax(1) instance (i): both selection gradients active at the shifted points") {
  auto f = make_objective("powmax:1");
  const double kappa = 0.5;
  for (int j = 1; j <= 20; ++j) {
    const double kj = std::pow(kappa, j);
    const double eps = kj / std::numbers::sqrt2;
    const Vector x = vec({kj, 0.0});
    const Vector y = x + eps * vec({-1.0, 1.0}) / std::numbers::sqrt2;
    CHECK(std::abs(std::abs(y(0)) - kj / 2) <= 1e-15 * kj);
    CHECK(std::abs(std::abs(y(1)) - kj / 2) <= 1e-15 * kj);
    const Vector y2 = x + eps * vec({-1.0, -1.0}) / std::numbers::sqrt2;
    bool up = false, down = false;
    for (const auto& p : {y, y2}) {
      for (const auto& a : f->active_gradients(p)) {
        up = up || a.gradient.isApprox(vec({0.0, 1.0}));
        down = down || a.gradient.isApprox(vec({0.0, -1.0}));
      }
    }
    CHECK(up);
    CHECK(down);
  }
}

TEST_CASE("catalog lists every id") {
  const auto& cat = test_function_catalog();
  CHECK(cat.size() >= 9);
  for (const auto& info : cat) {
    CHECK(!info.formula.empty());
  }
}
