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
#include <cstring>
#include <string>

#include "nsd/nsd.h"

TEST_CASE("objective handles") {
  nsd_objective_t* f = nullptr;
  REQUIRE(nsd_objective_create("maxq:3", &f) == NSD_OK);
  CHECK(nsd_objective_dim(f) == 3);
  const double x[] = {1.0, -4.0, 2.0};
  double v = 0.0, g[3] = {};
  CHECK(nsd_objective_eval(f, x, &v) == NSD_OK);
  CHECK(v == 16.0);
  CHECK(nsd_objective_subgradient(f, x, g) == NSD_OK);
  CHECK(g[1] == -8.0);
  CHECK(nsd_objective_eval(f, nullptr, &v) == NSD_ERR_CONTRACT);
  nsd_objective_destroy(f);

  nsd_objective_t* bad = nullptr;
  CHECK(nsd_objective_create("nosuch", &bad) == NSD_ERR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::strlen(nsd_last_error()) > 0);
}

TEST_CASE("min-norm through the C layer") {
  const double w[] = {3.0, 0.0, 0.0, 4.0};
  double v[2], a[2];
  REQUIRE(nsd_min_norm_point(w, 2, 2, v, a) == NSD_OK);
  CHECK(std::abs(std::hypot(v[0], v[1]) - 2.4) <= 1e-9);
  CHECK(std::abs(a[0] + a[1] - 1.0) <= 1e-12);
  CHECK(nsd_min_norm_point(w, 0, 2, v, nullptr) == NSD_ERR_CONTRACT);
}

TEST_CASE("config, run and trace accessors") {
  nsd_config_t* cfg = nullptr;
  REQUIRE(nsd_config_preset("figA4", &cfg) == NSD_OK);
  char* json = nullptr;
  REQUIRE(nsd_config_to_json(cfg, &json) == NSD_OK);
  nsd_config_t* again = nullptr;
  CHECK(nsd_config_parse(json, &again) == NSD_OK);
  nsd_string_free(json);
  nsd_config_destroy(again);

  nsd_trace_t* t = nullptr;
  REQUIRE(nsd_run(cfg, &t) == NSD_OK);
  CHECK(nsd_trace_status(t) == NSD_TERM_REACHED_J_MAX);
  CHECK(std::string(nsd_trace_status_name(t)) == "reached_j_max");
  CHECK(nsd_trace_outer_count(t) == 10);
  int j = 0, n = 0;
  double eps = 0, delta = 1, x = 0;
  CHECK(nsd_trace_outer(t, 0, &j, &n, &eps, &delta, &x) == NSD_OK);
  CHECK(j == 1);
  CHECK(n == 10);
  CHECK(delta == 0.0);
  CHECK(std::abs(x - 1.0 / 21) <= 1e-14);
  CHECK(nsd_trace_outer(t, 99, &j, &n, &eps, &delta, &x) == NSD_ERR_CONTRACT);
  nsd_trace_destroy(t);
  nsd_config_destroy(cfg);

  nsd_config_t* broken = nullptr;
  CHECK(nsd_config_parse("{\"function\": \"abs\"}", &broken) == NSD_ERR_CONFIG);
}

TEST_CASE("list, verify and reproduce return JSON") {
  char* s = nullptr;
  REQUIRE(nsd_list_functions(&s) == NSD_OK);
  CHECK(std::string(s).find("crescent") != std::string::npos);
  nsd_string_free(s);
  REQUIRE(nsd_verify("abs", "growth", 0, &s) == NSD_OK);
  CHECK(std::string(s).find("\"pass\"") != std::string::npos);
  nsd_string_free(s);
  CHECK(nsd_verify("abs", "nope", 0, &s) == NSD_ERR_CONFIG);
  REQUIRE(nsd_reproduce_targets(&s) == NSD_OK);
  CHECK(std::string(s).find("exampleA3") != std::string::npos);
  nsd_string_free(s);
  CHECK(nsd_reproduce("nowhere", "/tmp", 1, &s, nullptr) == NSD_ERR_CONFIG);
}
