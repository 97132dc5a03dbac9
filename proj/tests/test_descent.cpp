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
#include <sstream>

#include "nsd/descent.hpp"
#include "nsd/test_functions.hpp"

using namespace nsd;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double e : v) x(k++) = e;
  return x;
}

DescentConfig random_config(std::uint64_t seed, int samples, int j_max) {
  DescentConfig c;
  c.approx.mode = ApproxMode::Random;
  c.approx.sample_count = samples;
  c.approx.seed = seed;
  c.stop.j_max = j_max;
  return c;
}

std::string csv_of(const DescentTrace& t) {
  std::ostringstream s;
  write_trace_csv(s, t);
  return s.str();
}

void check_trace_invariants(const Objective& f, const DescentTrace& tr, double c) {
  for (std::size_t k = 1; k < tr.inner.size(); ++k) {
    const auto& prev = tr.inner[k - 1];
    const auto& cur = tr.inner[k];
    CHECK(cur.f <= prev.f);
    if (prev.kind == ApproxKind::SufficientDescent) {
      // Step acceptance inequality, re-evaluated from the stored points.
      const double t = prev.t;
      const double step = (cur.x - prev.x).norm();
      CHECK(t >= prev.eps / prev.norm_v * (1 - 1e-12));
      CHECK(f.eval(cur.x) <= f.eval(prev.x) - c * t * prev.norm_v * prev.norm_v + 1e-12);
      CHECK(std::abs(step - t * prev.norm_v) <= 1e-12 * std::max(1.0, step));
      CHECK(cur.f < prev.f);
    }
  }
  for (const auto& o : tr.outer) CHECK(o.norm_v <= o.delta);
}

}  // namespace

TEST_CASE("schedules") {
  CHECK(Schedule::geometric(10, 0.5).at(3).value() == 10 * 0.125);
  CHECK(Schedule::super_geometric(10, 0.75).at(2).value() == doctest::Approx(10 * std::pow(0.75, 4)));
  CHECK(Schedule::zero().at(7).value() == 0.0);
  CHECK(Schedule::constant(2).at(9).value() == 2.0);
  const auto t = Schedule::table({1.0, 0.5});
  CHECK(t.at(2).value() == 0.5);
  CHECK(!t.at(3).has_value());
  CHECK_THROWS_AS(Schedule::geometric(1, 1.5).validate(), Error);
  CHECK_THROWS_AS(Schedule::table({1.0, -1.0}).validate(), Error);
}

TEST_CASE("expand_step examples") {
  auto f = make_objective("abs");
  Oracle o(*f);
  CHECK(expand_step(o, vec({1.0}), vec({-1.0}), 0.5, 0.9, 0) == 0.5);
  // Doubling 0.25 -> 0.5 -> 1.0 succeeds (f(0) = 0 <= 0.1); 2.0 fails.
  CHECK(expand_step(o, vec({1.0}), vec({-1.0}), 0.25, 0.9, 30) == 1.0);
}

TEST_CASE("abs with exact sets and fixed steps: N_j = 10 and x^j = 21^-j") {
  auto f = make_objective("abs");
  std::vector<double> eps;
  double pw = 1.0;
  for (int j = 1; j <= 10; ++j) eps.push_back(2.0 / (pw *= 21.0));
  DescentConfig c;
  c.approx.mode = ApproxMode::Exact;
  c.step.max_doublings = 0;
  c.stop.j_max = 6;
  const auto tr = run_descent(*f, vec({1.0}), Schedule::table(eps), Schedule::zero(), c);
  REQUIRE(tr.outer.size() == 6);
  for (const auto& o : tr.outer) {
    CHECK(o.N == 10);
    const double exact = std::pow(21.0, -o.j);
    // Each stage loses about log2(21) bits to cancellation.
    CHECK(std::abs(o.x(0) - exact) <= 1e-15 * std::pow(21.0, o.j) * exact);
  }
  check_trace_invariants(*f, tr, 0.9);
}

TEST_CASE("l enumeration follows the stage counts") {
  auto f = make_objective("maxq:4");
  const auto tr = run_descent(*f, vec({1, -2, 3, 0.5}), Schedule::geometric(1, 0.5), Schedule::geometric(1, 0.5),
                              random_config(3, 20, 8));
  long l = 1;  // l = j + i + sum_{k<j} N_k starts at 1
  int j = 1, i = 0;
  for (const auto& r : tr.inner) {
    CHECK(r.l == l);
    CHECK(r.j == j);
    CHECK(r.i == i);
    ++l;
    if (r.kind == ApproxKind::Critical) {
      ++j;
      i = 0;
    } else {
      ++i;
    }
  }
  long sum_n = 0;
  for (const auto& o : tr.outer) {
    CHECK(o.N >= 0);
    sum_n += o.N;
  }
  CHECK(static_cast<long>(tr.inner.size()) == sum_n + static_cast<long>(tr.outer.size()));
}

TEST_CASE("start at the minimizer gives critical stages with no steps") {
  for (const char* id : {"maxq:3", "abs", "nesterov:5"}) {
    auto f = make_objective(id);
    const auto& m = *f->metadata();
    const auto tr = run_descent(*f, m.x_star, Schedule::geometric(1, 0.5), Schedule::geometric(1, 0.5),
                                DescentConfig{.approx = {}, .step = {}, .stop = {.j_max = 5}});
    for (const auto& o : tr.outer) {
      CHECK(o.N == 0);
      CHECK(o.x == m.x_star);
    }
  }
}

TEST_CASE("MaxQ(10) preset: R-linear decrease and bounded N_j") {
  auto f = make_objective("maxq:10");
  const auto tr = run_descent(*f, vec({1, 2, 3, 4, 5, -6, -7, -8, -9, -10}), Schedule::geometric(10, 0.5),
                              Schedule::geometric(10, 0.5), random_config(1, 100, 20));
  REQUIRE(tr.outer.size() == 20);
  CHECK(tr.status == TerminalStatus::ReachedJMax);
  for (const auto& o : tr.outer) CHECK(o.N <= 200);
  CHECK(tr.outer.back().x.norm() < 1e-4);
  check_trace_invariants(*f, tr, 0.9);
}

TEST_CASE("property: replay is bit-identical") {
  for (const char* id : {"powmax:3", "crescent", "maxq:6"}) {
    auto f = make_objective(id);
    const auto n = static_cast<Eigen::Index>(f->dim());
    const Vector x0 = Vector::Constant(n, 0.8);
    for (std::uint64_t seed : {1, 99}) {
      const auto cfg = random_config(seed, 0, 12);
      const auto a = run_descent(*f, x0, Schedule::geometric(0.5, 0.6), Schedule::geometric(0.5, 0.6), cfg);
      const auto b = run_descent(*f, x0, Schedule::geometric(0.5, 0.6), Schedule::geometric(0.5, 0.6), cfg);
      CHECK(csv_of(a) == csv_of(b));
      CHECK(a.oracle_calls == b.oracle_calls);
    }
  }
}

TEST_CASE("property: step inequality, monotone f and stage certificates") {
  const char* ids[] = {"powmax:3", "crescent", "maxq:6", "nesterov:8", "cubicmax4"};
  for (const char* id : ids) {
    auto f = make_objective(id);
    CAPTURE(id);
    const auto n = static_cast<Eigen::Index>(f->dim());
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      DescentConfig cfg = random_config(seed, 0, 10);
      if (seed == 2) cfg.approx.mode = ApproxMode::Deterministic;
      if (seed == 3) cfg.approx.warm_start = true;
      const Vector x0 = Vector::LinSpaced(n, -1.0, 1.5);
      const auto tr = run_descent(*f, x0, Schedule::geometric(0.3, 0.7), Schedule::geometric(0.3, 0.7), cfg);
      CHECK(tr.status != TerminalStatus::AbortedApproxFailure);
      check_trace_invariants(*f, tr, cfg.c);
    }
  }
}

TEST_CASE("trace columns") {
  const auto cols = trace_columns(2);
  CHECK(cols.front() == "l");
  CHECK(std::find(cols.begin(), cols.end(), "x_1") != cols.end());
  CHECK(std::find(cols.begin(), cols.end(), "x_2") != cols.end());
  auto f = make_objective("abs");
  const auto tr = run_descent(*f, vec({1.0}), Schedule::geometric(0.5, 0.5), Schedule::zero(),
                              DescentConfig{.approx = {.mode = ApproxMode::Exact}, .step = {}, .stop = {.j_max = 2}});
  const std::string text = csv_of(tr);
  const auto header = text.substr(0, text.find('\n'));
  CHECK(std::count(header.begin(), header.end(), ',') + 1 == static_cast<long>(trace_columns(1).size()));
}
