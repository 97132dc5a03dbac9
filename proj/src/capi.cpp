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

#include "nsd/nsd.h"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "nsd/error.hpp"
#include "nsd/experiment.hpp"
#include "nsd/minnorm.hpp"
#include "nsd/test_functions.hpp"

struct nsd_objective {
  nsd::ObjectivePtr f;
};

struct nsd_config {
  nsd::ExperimentConfig cfg;
};

struct nsd_trace {
  nsd::ExperimentRun run;
};

namespace {

thread_local std::string last_error;

nsd_status code_of(nsd::ErrorCode c) {
  switch (c) {
    case nsd::ErrorCode::ContractViolation: return NSD_ERR_CONTRACT;
    case nsd::ErrorCode::DimensionMismatch: return NSD_ERR_DIMENSION;
    case nsd::ErrorCode::Capability: return NSD_ERR_CAPABILITY;
    case nsd::ErrorCode::SolverFailure: return NSD_ERR_SOLVER;
    case nsd::ErrorCode::EnrichmentFailure: return NSD_ERR_ENRICHMENT;
    case nsd::ErrorCode::NotAMinimum: return NSD_ERR_NOT_A_MINIMUM;
    case nsd::ErrorCode::Configuration: return NSD_ERR_CONFIG;
    case nsd::ErrorCode::Io: return NSD_ERR_IO;
  }
  return NSD_ERR_INTERNAL;
}

template <class F>
nsd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return NSD_OK;
  } catch (const nsd::MinNormFailure& e) {
    last_error = e.what();
    return NSD_ERR_SOLVER;
  } catch (const nsd::Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NSD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NSD_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return NSD_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) nsd::fail(nsd::ErrorCode::ContractViolation, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ",") + item;
  return s;
}

}  // namespace

extern "C" {

const char* nsd_last_error(void) { return last_error.c_str(); }

const char* nsd_status_name(nsd_status status) {
  switch (status) {
    case NSD_OK: return "ok";
    case NSD_ERR_CONTRACT: return "contract_violation";
    case NSD_ERR_DIMENSION: return "dimension_mismatch";
    case NSD_ERR_CAPABILITY: return "capability";
    case NSD_ERR_SOLVER: return "solver_failure";
    case NSD_ERR_ENRICHMENT: return "enrichment_failure";
    case NSD_ERR_NOT_A_MINIMUM: return "not_a_minimum";
    case NSD_ERR_CONFIG: return "configuration";
    case NSD_ERR_IO: return "io";
    case NSD_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void nsd_string_free(char* s) { std::free(s); }

nsd_status nsd_objective_create(const char* id, nsd_objective_t** out) {
  return guarded([&] {
    need(id, "id");
    need(out, "out");
    *out = new nsd_objective{nsd::make_objective(id)};
  });
}

void nsd_objective_destroy(nsd_objective_t* f) { delete f; }

size_t nsd_objective_dim(const nsd_objective_t* f) { return f ? f->f->dim() : 0; }

nsd_status nsd_objective_eval(const nsd_objective_t* f, const double* x, double* value) {
  return guarded([&] {
    need(f, "objective");
    need(x, "x");
    need(value, "value");
    const auto n = static_cast<Eigen::Index>(f->f->dim());
    *value = f->f->eval(Eigen::Map<const nsd::Vector>(x, n));
  });
}

nsd_status nsd_objective_subgradient(const nsd_objective_t* f, const double* x, double* g) {
  return guarded([&] {
    need(f, "objective");
    need(x, "x");
    need(g, "g");
    const auto n = static_cast<Eigen::Index>(f->f->dim());
    Eigen::Map<nsd::Vector>(g, n) = f->f->subgradient(Eigen::Map<const nsd::Vector>(x, n));
  });
}

nsd_status nsd_list_functions(char** json_out) {
  return guarded([&] {
    need(json_out, "json_out");
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& info : nsd::test_function_catalog()) {
      arr.push_back({{"id", info.id}, {"formula", info.formula}, {"parametrized", info.parametrized}});
    }
    *json_out = dup(arr.dump(2));
  });
}

nsd_status nsd_min_norm_point(const double* w, size_t k, size_t n, double* v, double* coeffs) {
  return guarded([&] {
    need(w, "w");
    need(v, "v");
    std::vector<nsd::Vector> pts;
    pts.reserve(k);
    for (size_t i = 0; i < k; ++i) {
      pts.emplace_back(Eigen::Map<const nsd::Vector>(w + i * n, static_cast<Eigen::Index>(n)));
    }
    const nsd::MinNormResult r = nsd::min_norm_point(pts);
    Eigen::Map<nsd::Vector>(v, static_cast<Eigen::Index>(n)) = r.v;
    if (coeffs != nullptr) std::copy(r.coefficients.begin(), r.coefficients.end(), coeffs);
  });
}

nsd_status nsd_config_parse(const char* json, nsd_config_t** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new nsd_config{nsd::parse_config(json)};
  });
}

nsd_status nsd_config_preset(const char* name, nsd_config_t** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new nsd_config{nsd::preset_config(name)};
  });
}

nsd_status nsd_config_set_seed(nsd_config_t* cfg, uint64_t seed) {
  return guarded([&] {
    need(cfg, "config");
    cfg->cfg.descent.approx.seed = seed;
  });
}

nsd_status nsd_config_set_output_dir(nsd_config_t* cfg, const char* dir) {
  return guarded([&] {
    need(cfg, "config");
    need(dir, "dir");
    cfg->cfg.outputs = dir;
  });
}

nsd_status nsd_config_output_dir(const nsd_config_t* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = dup(cfg->cfg.outputs);
  });
}

nsd_status nsd_config_to_json(const nsd_config_t* cfg, char** json_out) {
  return guarded([&] {
    need(cfg, "config");
    need(json_out, "json_out");
    *json_out = dup(nsd::config_to_json(cfg->cfg));
  });
}

void nsd_config_destroy(nsd_config_t* cfg) { delete cfg; }

nsd_status nsd_run(const nsd_config_t* cfg, nsd_trace_t** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = new nsd_trace{nsd::run_experiment(cfg->cfg)};
  });
}

nsd_terminal nsd_trace_status(const nsd_trace_t* t) {
  return static_cast<nsd_terminal>(static_cast<int>(t->run.trace.status));
}

const char* nsd_trace_status_name(const nsd_trace_t* t) { return nsd::to_string(t->run.trace.status); }

const char* nsd_trace_diagnostic(const nsd_trace_t* t) { return t->run.trace.diagnostic.c_str(); }

size_t nsd_trace_inner_count(const nsd_trace_t* t) { return t->run.trace.inner.size(); }

size_t nsd_trace_outer_count(const nsd_trace_t* t) { return t->run.trace.outer.size(); }

uint64_t nsd_trace_oracle_calls(const nsd_trace_t* t) { return t->run.trace.oracle_calls; }

nsd_status nsd_trace_outer(const nsd_trace_t* t, size_t index, int* j, int* n_j, double* eps, double* delta,
                           double* x) {
  return guarded([&] {
    need(t, "trace");
    if (index >= t->run.trace.outer.size()) nsd::fail(nsd::ErrorCode::ContractViolation, "outer index out of range");
    const auto& o = t->run.trace.outer[index];
    if (j) *j = o.j;
    if (n_j) *n_j = o.N;
    if (eps) *eps = o.eps;
    if (delta) *delta = o.delta;
    if (x) Eigen::Map<nsd::Vector>(x, o.x.size()) = o.x;
  });
}

nsd_status nsd_trace_write(const nsd_trace_t* t, const char* dir) {
  return guarded([&] {
    need(t, "trace");
    need(dir, "dir");
    nsd::write_run_outputs(t->run, dir);
  });
}

void nsd_trace_destroy(nsd_trace_t* t) { delete t; }

nsd_status nsd_verify(const char* function_id, const char* checks, uint64_t seed, char** report_out) {
  return guarded([&] {
    need(function_id, "function_id");
    need(report_out, "report_out");
    std::vector<std::string> list;
    std::stringstream ss(checks ? checks : "growth,semismooth,convexity");
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) list.push_back(item);
    }
    *report_out = dup(nsd::verify_function(function_id, list, seed));
  });
}

nsd_status nsd_reproduce(const char* target, const char* dir, uint64_t seed, char** summary_out, int* all_passed) {
  return guarded([&] {
    need(target, "target");
    need(dir, "dir");
    need(summary_out, "summary_out");
    const auto results = nsd::reproduce(target, dir, seed);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.passed;
      arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    *summary_out = dup(arr.dump(2));
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

nsd_status nsd_reproduce_targets(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(join(nsd::reproduce_targets()));
  });
}

nsd_status nsd_preset_names(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(join(nsd::preset_names()));
  });
}

}  // extern "C"
