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

// nsd command-line front end. Talks to the library only through nsd.h.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "nsd/nsd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriterion = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

int exit_for(nsd_status s) {
  switch (s) {
    case NSD_OK: return kExitOk;
    case NSD_ERR_CONFIG:
    case NSD_ERR_IO:
    case NSD_ERR_CONTRACT:
    case NSD_ERR_DIMENSION: return kExitConfig;
    default: return kExitSolver;
  }
}

int report(nsd_status s, const std::string& context) {
  std::cerr << "nsd: " << context << ": " << nsd_status_name(s) << ": " << nsd_last_error() << "\n";
  return exit_for(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  nsd_string_free(s);
  return out;
}

struct Options {
  std::string config_path;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string function;
  std::string checks = "growth,semismooth,convexity";
  std::string target;
};

int cmd_run(const Options& o) {
  if (o.config_path.empty() == o.preset.empty()) {
    std::cerr << "nsd run: give exactly one of --config or --preset\n";
    return kExitConfig;
  }
  nsd_config_t* cfg = nullptr;
  nsd_status s;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) {
      std::cerr << "nsd run: cannot read " << o.config_path << "\n";
      return kExitConfig;
    }
    std::stringstream text;
    text << in.rdbuf();
    s = nsd_config_parse(text.str().c_str(), &cfg);
  } else {
    s = nsd_config_preset(o.preset.c_str(), &cfg);
  }
  if (s != NSD_OK) return report(s, "config");
  if (o.seed) nsd_config_set_seed(cfg, *o.seed);
  if (!o.out.empty()) nsd_config_set_output_dir(cfg, o.out.c_str());
  char* dir_c = nullptr;
  nsd_config_output_dir(cfg, &dir_c);
  std::string dir = take(dir_c);
  if (dir.empty()) dir = "nsd_out";

  nsd_trace_t* trace = nullptr;
  s = nsd_run(cfg, &trace);
  nsd_config_destroy(cfg);
  if (s != NSD_OK) return report(s, "run");
  s = nsd_trace_write(trace, dir.c_str());
  if (s != NSD_OK) {
    nsd_trace_destroy(trace);
    return report(s, "write");
  }
  const nsd_terminal term = nsd_trace_status(trace);
  std::cout << "status " << nsd_trace_status_name(trace) << ", stages " << nsd_trace_outer_count(trace)
            << ", inner steps " << nsd_trace_inner_count(trace) << ", oracle calls "
            << nsd_trace_oracle_calls(trace) << "\n";
  std::cout << "wrote " << dir << "\n";
  int code = kExitOk;
  if (term == NSD_TERM_ABORTED_APPROX_FAILURE) {
    std::cerr << "nsd run: aborted: " << nsd_trace_diagnostic(trace) << " (partial trace written)\n";
    code = kExitSolver;
  }
  nsd_trace_destroy(trace);
  return code;
}

int cmd_verify(const Options& o) {
  char* rep = nullptr;
  const nsd_status s = nsd_verify(o.function.c_str(), o.checks.c_str(), o.seed.value_or(0), &rep);
  if (s != NSD_OK) return report(s, "verify");
  const std::string text = take(rep);
  std::cout << text << "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!(f << text << "\n")) {
      std::cerr << "nsd verify: cannot write " << o.out << "\n";
      return kExitConfig;
    }
  }
  return kExitOk;
}

int cmd_reproduce(const Options& o) {
  std::vector<std::string> targets;
  if (o.target == "all") {
    char* list = nullptr;
    nsd_reproduce_targets(&list);
    std::stringstream ss(take(list));
    for (std::string t; std::getline(ss, t, ',');) targets.push_back(t);
  } else {
    targets.push_back(o.target);
  }
  const std::string base = o.out.empty() ? "nsd_reproduce" : o.out;
  bool all = true;
  for (const auto& t : targets) {
    char* summary = nullptr;
    int passed = 0;
    const std::string dir = targets.size() > 1 ? base + "/" + t : base;
    const nsd_status s = nsd_reproduce(t.c_str(), dir.c_str(), o.seed.value_or(1), &summary, &passed);
    if (s != NSD_OK) return report(s, "reproduce " + t);
    for (const auto& r : nlohmann::json::parse(take(summary))) {
      std::cout << (r["passed"].get<bool>() ? "PASS " : "FAIL ") << r["name"].get<std::string>() << " | "
                << r["detail"].get<std::string>() << "\n";
    }
    all = all && passed;
  }
  return all ? kExitOk : kExitCriterion;
}

int cmd_list() {
  char* json = nullptr;
  const nsd_status s = nsd_list_functions(&json);
  if (s != NSD_OK) return report(s, "list-functions");
  for (const auto& f : nlohmann::json::parse(take(json))) {
    std::printf("%-16s %s\n", f["id"].get<std::string>().c_str(), f["formula"].get<std::string>().c_str());
  }
  char* presets = nullptr;
  nsd_preset_names(&presets);
  std::printf("\npresets: %s\n", take(presets).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goldstein eps-descent experiments"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "run one descent and write trace.csv, manifest.json, rate_report.json");
  run->add_option("--config", o.config_path, "JSON config file");
  run->add_option("--preset", o.preset, "named preset (fig4, fig5, fig6, figA4)");
  run->add_option("--out", o.out, "output directory, overrides the config");
  run->add_option("--seed", o.seed, "sampling seed, overrides the config");

  auto* verify = app.add_subcommand("verify", "check growth order, semismoothness and selection convexity");
  verify->add_option("function", o.function, "function id, e.g. maxq:10")->required();
  verify->add_option("--checks", o.checks, "comma separated subset of growth,semismooth,convexity");
  verify->add_option("--out", o.out, "also write the JSON report to this file");
  verify->add_option("--seed", o.seed, "sampling seed");

  auto* repro = app.add_subcommand("reproduce", "rerun a figure or example and check its criteria");
  repro->add_option("target", o.target, "figA4, fig4, fig5, fig6, exampleA3 or all")->required();
  repro->add_option("--out", o.out, "directory for the plot CSVs");
  repro->add_option("--seed", o.seed, "base seed (default 1)");

  app.add_subcommand("list-functions", "list test function ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (run->parsed()) return cmd_run(o);
  if (verify->parsed()) return cmd_verify(o);
  if (repro->parsed()) return cmd_reproduce(o);
  return cmd_list();
}
