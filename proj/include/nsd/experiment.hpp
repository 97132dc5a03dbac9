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

#ifndef NSD_EXPERIMENT_HPP
#define NSD_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nsd/analysis.hpp"
#include "nsd/descent.hpp"
#include "nsd/objective.hpp"

namespace nsd {

/// One experiment, serialized as a single JSON document:
///
///   {"function": "powmax:3", "x0": [10, 0],
///    "eps_schedule": {"kind": "geometric", "a": 0.01, "kappa": 0.85},
///    "delta_schedule": {"kind": "geometric", "a": 20, "kappa": 0.75},
///    "c": 0.9,
///    "approx": {"mode": "random", "sample_count": 100, "seed": 1,
///               "warm_start": false, "max_rounds": 50, "bisection_iters": 60},
///    "step": {"mode": "expand", "max_doublings": 30},
///    "stop": {"j_max": 60, "l_max": 100000, "eps_min": 1e-14},
///    "outputs": "out/fig4"}
///
/// x0 is either an array or a name: "metadata" (the known minimizer),
/// "const:<v>" (every coordinate v). Unknown keys are rejected.
struct ExperimentConfig {
  std::string function;
  std::vector<double> x0;
  std::string x0_name;  // set instead of x0 for named starting points
  Schedule eps_schedule;
  Schedule delta_schedule;
  DescentConfig descent;
  std::string outputs;
};

ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);

/// "fig4", "fig5", "fig6", "figA4".
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Resolves x0 against the objective.
Vector starting_point(const ExperimentConfig& config, const Objective& f);

struct ExperimentRun {
  ExperimentConfig config;
  ObjectivePtr objective;
  DescentTrace trace;
};

ExperimentRun run_experiment(const ExperimentConfig& config);

/// Writes trace.csv, manifest.json and, when the objective knows its minimum
/// and order, rate_report.json into `dir`.
void write_run_outputs(const ExperimentRun& run, const std::filesystem::path& dir);

std::string rate_report_json(const RateReport& report, int p);

/// Checks "growth", "semismooth", "convexity". Each entry of the returned
/// JSON has a status of "pass", "flag" or "skipped" plus numeric evidence.
std::string verify_function(const std::string& function_id, const std::vector<std::string>& checks,
                            std::uint64_t seed = 0);

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs one reproduction target ("figA4", "fig4", "fig5", "fig6",
/// "exampleA3"), writes plot-data CSVs into `dir` and returns one result per
/// checked criterion.
std::vector<CriterionResult> reproduce(const std::string& target, const std::filesystem::path& dir,
                                       std::uint64_t seed = 1);
std::vector<std::string> reproduce_targets();

}  // namespace nsd

#endif  // NSD_EXPERIMENT_HPP
