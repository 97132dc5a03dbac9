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

#include "nsd/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nsd/error.hpp"
#include "nsd/test_functions.hpp"

namespace nsd {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::Configuration, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(ErrorCode::Configuration, "unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Schedule schedule_from_json(const json& j, const std::string& where) {
  check_keys(j, {"kind", "a", "kappa", "values"}, where);
  const auto kind = j.at("kind").get<std::string>();
  Schedule s;
  if (kind == "geometric") {
    s = Schedule::geometric(j.at("a").get<double>(), j.at("kappa").get<double>());
  } else if (kind == "supergeometric") {
    s = Schedule::super_geometric(j.at("a").get<double>(), j.at("kappa").get<double>());
  } else if (kind == "constant") {
    s = Schedule::constant(j.at("a").get<double>());
  } else if (kind == "zero") {
    s = Schedule::zero();
  } else if (kind == "table") {
    s = Schedule::table(j.at("values").get<std::vector<double>>());
  } else {
    fail(ErrorCode::Configuration, where + ": unknown schedule kind '" + kind + "'");
  }
  s.validate();
  return s;
}

ordered_json schedule_to_json(const Schedule& s) {
  ordered_json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case Schedule::Kind::Geometric:
    case Schedule::Kind::SuperGeometric:
      j["a"] = s.a;
      j["kappa"] = s.kappa;
      break;
    case Schedule::Kind::Constant:
      j["a"] = s.a;
      break;
    case Schedule::Kind::Zero:
      break;
    case Schedule::Kind::Table:
      j["values"] = s.values;
      break;
  }
  return j;
}

ApproxMode mode_from_string(const std::string& m) {
  if (m == "deterministic") return ApproxMode::Deterministic;
  if (m == "random") return ApproxMode::Random;
  if (m == "exact") return ApproxMode::Exact;
  fail(ErrorCode::Configuration, "unknown approx mode '" + m + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

// CSV with a header row; every value printed with 17 significant digits.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t k = 0; k < header.size(); ++k) text_ << (k ? "," : "") << header[k];
    text_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    require(values.size() == columns_, "csv row width mismatch");
    std::size_t k = 0;
    for (double v : values) text_ << (k++ ? "," : "") << fmt(v);
    text_ << '\n';
  }
  void save(const std::filesystem::path& path) const { write_text(path, text_.str()); }

 private:
  std::size_t columns_;
  std::ostringstream text_;
};

double distance_to(const Vector& x, const MinimumMetadata& m) { return (x - m.x_star).norm(); }

CriterionResult criterion(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_xj_csv(const ExperimentRun& run, int p, double M, const std::filesystem::path& path) {
  const auto& meta = *run.objective->metadata();
  Csv csv({"j", "distance", "M_eps_term", "M_delta_term", "N_j"});
  for (const auto& o : run.trace.outer) {
    const double et = p == 1 ? o.eps : std::pow(o.eps, 1.0 / p);
    const double dt = p == 1 ? 0.0 : std::pow(o.delta, 1.0 / (p - 1));
    csv.row({static_cast<double>(o.j), distance_to(o.x, meta), M * et, M * dt, static_cast<double>(o.N)});
  }
  csv.save(path);
}

void write_zl_csv(const ExperimentRun& run, const std::filesystem::path& path) {
  const auto& meta = *run.objective->metadata();
  Csv csv({"l", "j", "i", "distance", "f_minus_fstar"});
  for (const auto& r : run.trace.inner) {
    csv.row({static_cast<double>(r.l), static_cast<double>(r.j), static_cast<double>(r.i), distance_to(r.x, meta),
             r.f - meta.f_star});
  }
  csv.save(path);
}

std::vector<CriterionResult> reproduce_figA4(const std::filesystem::path& dir) {
  ExperimentRun run = run_experiment(preset_config("figA4"));
  const auto& tr = run.trace;
  std::vector<CriterionResult> out;

  bool all_ten = !tr.outer.empty();
  for (const auto& o : tr.outer) all_ten = all_ten && o.N == 10;
  out.push_back(criterion("figA4: N_j = 10 for every stage", all_ten,
                          std::to_string(tr.outer.size()) + " stages"));

  double worst = 0.0;
  int worst_j = 0;
  for (const auto& o : tr.outer) {
    if (o.j > 8) break;
    const double exact = std::pow(21.0, -o.j);
    const double rel = std::abs(o.x(0) - exact) / exact;
    if (rel > worst) {
      worst = rel;
      worst_j = o.j;
    }
  }
  out.push_back(criterion("figA4: |x^j - 21^-j| / 21^-j <= 1e-10 for j <= 8", worst <= 1e-10,
                          "max relative error " + num(worst) + " at j = " + std::to_string(worst_j)));

  // f(z^l) - f* <= L r(l / (N_bar + 1) - 1) with r(j) = 21^-j, N_bar = 10.
  const auto rt = f_rate_bound([](double j) { return std::pow(21.0, -j); }, 10, 1.0);
  const long l_min = tr.outer.empty() ? 0 : tr.outer.front().N + 1;
  bool holds = true;
  double sup = 0.0;
  Csv csv({"l", "f_minus_fstar", "r_tilde"});
  for (const auto& r : tr.inner) {
    const double bound = rt(static_cast<double>(r.l));
    csv.row({static_cast<double>(r.l), r.f, bound});
    if (r.l <= l_min) continue;
    holds = holds && r.f <= bound;
    sup = std::max(sup, r.f / bound);
  }
  csv.save(dir / "figA4_fz.csv");
  out.push_back(criterion("figA4: f(z^l) - f* <= r~(l) for l > N_1 + 1", holds, "sup ratio " + num(sup)));
  out.push_back(criterion("figA4: sup_l (f(z^l) - f*) / r~(l) >= 1e-3", sup >= 1e-3, "sup ratio " + num(sup)));
  write_xj_csv(run, 1, 1.0, dir / "figA4_xj.csv");
  return out;
}

std::vector<CriterionResult> reproduce_fig4(const std::filesystem::path& dir, std::uint64_t seed) {
  int passes = 0;
  std::string detail;
  for (std::uint64_t s = seed; s < seed + 5; ++s) {
    ExperimentConfig cfg = preset_config("fig4");
    cfg.descent.approx.seed = s;
    ExperimentRun run = run_experiment(cfg);
    const auto& tr = run.trace;
    const int j_reached = tr.outer.empty() ? 0 : tr.outer.back().j;
    bool ok = j_reached >= 50;
    double M = 0.0;
    std::optional<int> cross;
    if (ok) {
      RateOptions opt;
      opt.j_last = 50;
      const RateReport rep = check_rate_bound(tr.outer, run.objective->metadata()->x_star, 3, opt);
      M = rep.M_fit;
      cross = rep.crossover_j;
      ok = M <= 3.0 && cross && std::abs(*cross - 35) <= 3;
    }
    passes += ok ? 1 : 0;
    detail += "seed " + std::to_string(s) + ": j=" + std::to_string(j_reached) + " M=" + num(M) +
              " crossover=" + (cross ? std::to_string(*cross) : std::string("none")) + (ok ? " ok; " : " FAIL; ");
    if (s == seed) {
      write_xj_csv(run, 3, 1.0, dir / "fig4_xj.csv");
      write_zl_csv(run, dir / "fig4_zl.csv");
    }
  }
  return {criterion("fig4: j >= 50, M_fit <= 3 on [5, 50], crossover 35 +- 3 (>= 4 of 5 seeds)", passes >= 4,
                    std::to_string(passes) + "/5 seeds; " + detail)};
}

std::vector<CriterionResult> reproduce_fig5(const std::filesystem::path& dir, std::uint64_t seed) {
  ExperimentConfig cfg = preset_config("fig5");
  cfg.descent.approx.seed = seed;
  ExperimentRun run = run_experiment(cfg);
  const auto& tr = run.trace;
  const auto& meta = *run.objective->metadata();
  std::vector<CriterionResult> out;

  RateOptions opt;
  opt.reference_M = 10.0;
  const RateReport rep = check_rate_bound(tr.outer, meta.x_star, 2, opt);
  out.push_back(criterion("fig5: ||x^j - x*|| <= 10 max(eps_j^1/2, delta_j) on audited j", rep.violations.empty(),
                          "M_fit " + num(rep.M_fit) + ", " + std::to_string(rep.violations.size()) + " violations"));

  std::vector<double> tail;
  for (const auto& e : rep.entries) tail.push_back(e.distance);
  const LineFit fit = log_linear_fit(tail);
  out.push_back(criterion("fig5: log ||x^j - x*|| linear in j (R^2 >= 0.95)", fit.r_squared >= 0.95,
                          "R^2 " + num(fit.r_squared) + ", slope " + num(fit.slope)));

  int n_max = 0;
  for (const auto& o : tr.outer) {
    if (o.j <= 30) n_max = std::max(n_max, o.N);
  }
  const bool reached = !tr.outer.empty() && tr.outer.back().j >= 30;
  out.push_back(criterion("fig5: max N_j <= 200 over j <= 30", reached && n_max <= 200,
                          "max N_j " + std::to_string(n_max) + ", last j " +
                              std::to_string(tr.outer.empty() ? 0 : tr.outer.back().j)));

  write_xj_csv(run, 2, 10.0, dir / "fig5_xj.csv");
  write_zl_csv(run, dir / "fig5_zl.csv");
  // f-rate estimate with r(j) = 10 max(eps_j^(1/2), delta_j).
  const int n_bar = n_max;
  const auto r = [&](double j) {
    const Schedule& e = cfg.eps_schedule;
    const double jj = std::max(j, 1.0);
    return 10.0 * std::max(std::sqrt(e.a * std::pow(e.kappa, jj)), cfg.delta_schedule.a * std::pow(cfg.delta_schedule.kappa, jj));
  };
  const auto rt = f_rate_bound(r, n_bar, meta.lipschitz);
  Csv csv({"l", "f_minus_fstar", "L_r_tilde"});
  for (const auto& rec : tr.inner) csv.row({static_cast<double>(rec.l), rec.f - meta.f_star, rt(static_cast<double>(rec.l))});
  csv.save(dir / "fig5_fz.csv");
  return out;
}

std::vector<CriterionResult> reproduce_fig6(const std::filesystem::path& dir) {
  ExperimentRun run = run_experiment(preset_config("fig6"));
  const auto& tr = run.trace;
  const auto& meta = *run.objective->metadata();
  std::vector<CriterionResult> out;
  const bool completed = tr.status == TerminalStatus::ReachedJMax;

  RateOptions opt;
  opt.reference_M = 3.0;
  const RateReport rep = check_rate_bound(tr.outer, meta.x_star, 2, opt);
  out.push_back(criterion("fig6: ||x^j - x*|| <= 3 max(eps_j^1/2, delta_j) on audited j",
                          completed && rep.violations.empty(),
                          std::string(to_string(tr.status)) + ", M_fit " + num(rep.M_fit)));

  std::vector<double> dist;
  for (const auto& o : tr.outer) dist.push_back(distance_to(o.x, meta));
  const RateClassification cls = rate_classify(dist);
  out.push_back(criterion("fig6: (||x^j - x*||)_j classified superlinear", cls.kind == RateClass::Superlinear,
                          std::string(to_string(cls.kind)) + ", q " + num(cls.order)));

  bool monotone = tr.outer.size() >= 4;
  std::string ns;
  for (std::size_t k = 0; k < tr.outer.size(); ++k) {
    ns += std::to_string(tr.outer[k].N) + " ";
    if (k >= 3 && tr.outer[k].N < tr.outer[k - 1].N) monotone = false;
  }
  const bool grows = tr.outer.size() >= 3 && tr.outer.back().N >= 4 * tr.outer[2].N;
  out.push_back(criterion("fig6: N_j non-decreasing from j = 3 and N_jmax >= 4 N_3", completed && monotone && grows,
                          "N_j = " + ns));
  write_xj_csv(run, 2, 3.0, dir / "fig6_xj.csv");
  write_zl_csv(run, dir / "fig6_zl.csv");
  return out;
}

std::vector<CriterionResult> reproduce_exampleA3(const std::filesystem::path& dir) {
  std::vector<CriterionResult> out;
  const double kappa = 0.5;
  Csv csv({"p", "j", "distance", "bound", "eps_binds"});
  for (int p : {2, 3}) {
    std::vector<OuterRecord> seq;
    for (int j = 1; j <= 20; ++j) {
      OuterRecord o;
      o.j = j;
      o.x = Vector::Zero(2);
      o.x(0) = std::pow(kappa, j);
      o.eps = j % 2 == 0 ? std::pow(std::pow(kappa, p), j) : 0.0;
      o.delta = j % 2 == 0 ? 0.0 : std::pow(std::pow(kappa, p - 1), j);
      seq.push_back(o);
    }
    RateOptions opt;
    opt.transient_skip = 1;
    const RateReport rep = check_rate_bound(seq, Vector::Zero(2), p, opt);
    bool alternates = true;
    for (const auto& e : rep.entries) {
      alternates = alternates && (e.binding == (e.j % 2 == 0 ? Binding::EpsTerm : Binding::DeltaTerm));
      csv.row({static_cast<double>(p), static_cast<double>(e.j), e.distance, e.bound,
               e.binding == Binding::EpsTerm ? 1.0 : 0.0});
    }
    out.push_back(criterion("exampleA3 alternating p=" + std::to_string(p) + ": M_fit = 1 +- 1e-10, binding alternates",
                            std::abs(rep.M_fit - 1.0) <= 1e-10 && alternates, "M_fit " + fmt(rep.M_fit)));
  }
  {
    std::vector<OuterRecord> seq;
    for (int j = 1; j <= 20; ++j) {
      OuterRecord o;
      o.j = j;
      o.x = Vector::Zero(2);
      o.x(0) = std::pow(kappa, j);
      o.eps = std::pow(kappa, j) / std::numbers::sqrt2;
      seq.push_back(o);
    }
    RateOptions opt;
    opt.transient_skip = 1;
    const RateReport rep = check_rate_bound(seq, Vector::Zero(2), 1, opt);
    out.push_back(criterion("exampleA3 p=1: ||x^j - x*|| / eps_j = sqrt(2)",
                            std::abs(rep.M_fit - std::numbers::sqrt2) <= 1e-10, "M_fit " + fmt(rep.M_fit)));

    auto f = make_objective("powmax:1");
    Oracle oracle(*f);
    bool critical = true;
    for (int j = 1; j <= 20; ++j) {
      const auto& o = seq[static_cast<std::size_t>(j - 1)];
      const auto res = build_sufficient_approx(oracle, o.x, o.eps, 0.0, 0.9, {ApproxMode::Exact, 0, 0});
      critical = critical && res.status.kind == ApproxKind::Critical;
    }
    out.push_back(criterion("exampleA3 p=1: exact eps_j-subdifferential at x^j contains 0", critical,
                            "exact mode, delta = 0, j = 1..20"));
  }
  csv.save(dir / "exampleA3.csv");
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Configuration, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    check_keys(j, {"function", "x0", "eps_schedule", "delta_schedule", "c", "approx", "step", "stop", "outputs"},
               "config");
    ExperimentConfig cfg;
    cfg.function = j.at("function").get<std::string>();
    parse_test_function(cfg.function);
    const json& x0 = j.at("x0");
    if (x0.is_string()) {
      cfg.x0_name = x0.get<std::string>();
      if (cfg.x0_name != "metadata" && cfg.x0_name.rfind("const:", 0) != 0) {
        fail(ErrorCode::Configuration, "unknown named x0 '" + cfg.x0_name + "'");
      }
    } else {
      cfg.x0 = x0.get<std::vector<double>>();
    }
    cfg.eps_schedule = schedule_from_json(j.at("eps_schedule"), "eps_schedule");
    cfg.delta_schedule = schedule_from_json(j.at("delta_schedule"), "delta_schedule");
    DescentConfig& d = cfg.descent;
    d.c = get_or(j, "c", d.c);
    if (!(d.c > 0.0 && d.c < 1.0)) fail(ErrorCode::Configuration, "c must lie in (0, 1)");
    if (j.contains("approx")) {
      const json& a = j.at("approx");
      check_keys(a, {"mode", "sample_count", "seed", "warm_start", "max_rounds", "bisection_iters"}, "approx");
      d.approx.mode = mode_from_string(get_or<std::string>(a, "mode", "deterministic"));
      d.approx.sample_count = get_or(a, "sample_count", d.approx.sample_count);
      d.approx.seed = get_or(a, "seed", d.approx.seed);
      d.approx.warm_start = get_or(a, "warm_start", d.approx.warm_start);
      d.approx.caps.max_rounds = get_or(a, "max_rounds", d.approx.caps.max_rounds);
      d.approx.caps.bisection_iters = get_or(a, "bisection_iters", d.approx.caps.bisection_iters);
      if (d.approx.sample_count < 0 || d.approx.caps.max_rounds < 0 || d.approx.caps.bisection_iters < 1) {
        fail(ErrorCode::Configuration, "approx counts must be nonnegative");
      }
    }
    if (j.contains("step")) {
      const json& s = j.at("step");
      check_keys(s, {"mode", "max_doublings"}, "step");
      const auto mode = get_or<std::string>(s, "mode", "expand");
      if (mode == "fixed") {
        d.step.max_doublings = 0;
      } else if (mode == "expand") {
        d.step.max_doublings = get_or(s, "max_doublings", d.step.max_doublings);
        if (d.step.max_doublings < 0) fail(ErrorCode::Configuration, "max_doublings must be >= 0");
      } else {
        fail(ErrorCode::Configuration, "unknown step mode '" + mode + "'");
      }
    }
    if (j.contains("stop")) {
      const json& s = j.at("stop");
      check_keys(s, {"j_max", "l_max", "eps_min"}, "stop");
      d.stop.j_max = get_or(s, "j_max", d.stop.j_max);
      d.stop.l_max = get_or(s, "l_max", d.stop.l_max);
      d.stop.eps_min = get_or(s, "eps_min", d.stop.eps_min);
    }
    cfg.outputs = get_or<std::string>(j, "outputs", "");
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorCode::Configuration, std::string("bad config field: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["function"] = cfg.function;
  if (cfg.x0_name.empty()) {
    j["x0"] = cfg.x0;
  } else {
    j["x0"] = cfg.x0_name;
  }
  j["eps_schedule"] = schedule_to_json(cfg.eps_schedule);
  j["delta_schedule"] = schedule_to_json(cfg.delta_schedule);
  const DescentConfig& d = cfg.descent;
  j["c"] = d.c;
  j["approx"] = {{"mode", to_string(d.approx.mode)},
                 {"sample_count", d.approx.sample_count},
                 {"seed", d.approx.seed},
                 {"warm_start", d.approx.warm_start},
                 {"max_rounds", d.approx.caps.max_rounds},
                 {"bisection_iters", d.approx.caps.bisection_iters}};
  j["step"] = {{"mode", d.step.max_doublings == 0 ? "fixed" : "expand"}, {"max_doublings", d.step.max_doublings}};
  j["stop"] = {{"j_max", d.stop.j_max}, {"l_max", d.stop.l_max}, {"eps_min", d.stop.eps_min}};
  j["outputs"] = cfg.outputs;
  return j.dump(2);
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  DescentConfig& d = cfg.descent;
  d.c = 0.9;
  if (name == "fig4") {
    cfg.function = "powmax:3";
    cfg.x0 = {10.0, 0.0};
    cfg.eps_schedule = Schedule::geometric(0.01, 0.85);
    cfg.delta_schedule = Schedule::geometric(20.0, 0.75);
    d.approx.mode = ApproxMode::Random;
    d.approx.sample_count = 100;
    d.approx.seed = 1;
    d.stop.j_max = 60;
  } else if (name == "fig5") {
    cfg.function = "maxq:10";
    cfg.x0 = {1, 2, 3, 4, 5, -6, -7, -8, -9, -10};
    cfg.eps_schedule = Schedule::geometric(10.0, 0.5);
    cfg.delta_schedule = Schedule::geometric(10.0, 0.5);
    d.approx.mode = ApproxMode::Random;
    d.approx.sample_count = 100;
    d.approx.seed = 1;
    d.stop.j_max = 30;
  } else if (name == "fig6") {
    cfg.function = "nesterov:100";
    cfg.x0_name = "const:10";
    cfg.eps_schedule = Schedule::super_geometric(10.0, 0.75);
    cfg.delta_schedule = Schedule::super_geometric(10.0, 0.75);
    d.approx.mode = ApproxMode::Deterministic;
    d.approx.caps.max_rounds = 1000;
    d.stop.j_max = 8;
  } else if (name == "figA4") {
    cfg.function = "abs";
    cfg.x0 = {1.0};
    std::vector<double> eps;
    double pw = 1.0;
    for (int j = 1; j <= 12; ++j) {
      pw *= 21.0;
      eps.push_back(2.0 / pw);
    }
    cfg.eps_schedule = Schedule::table(eps);
    cfg.delta_schedule = Schedule::zero();
    d.approx.mode = ApproxMode::Exact;
    d.step.max_doublings = 0;
    d.stop.j_max = 10;
  } else {
    fail(ErrorCode::Configuration, "unknown preset '" + name + "'");
  }
  return cfg;
}

std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6", "figA4"}; }

Vector starting_point(const ExperimentConfig& cfg, const Objective& f) {
  const auto n = static_cast<Eigen::Index>(f.dim());
  if (cfg.x0_name == "metadata") {
    if (!f.metadata()) fail(ErrorCode::Configuration, f.name() + " has no known minimizer");
    return f.metadata()->x_star;
  }
  if (cfg.x0_name.rfind("const:", 0) == 0) {
    double v = 0.0;
    try {
      v = std::stod(cfg.x0_name.substr(6));
    } catch (const std::exception&) {
      fail(ErrorCode::Configuration, "bad constant in x0 '" + cfg.x0_name + "'");
    }
    return Vector::Constant(n, v);
  }
  if (!cfg.x0_name.empty()) fail(ErrorCode::Configuration, "unknown named x0 '" + cfg.x0_name + "'");
  if (static_cast<Eigen::Index>(cfg.x0.size()) != n) {
    fail(ErrorCode::Configuration, "x0 has " + std::to_string(cfg.x0.size()) + " entries, " + f.name() + " needs " +
                                       std::to_string(n));
  }
  return Eigen::Map<const Vector>(cfg.x0.data(), n);
}

ExperimentRun run_experiment(const ExperimentConfig& config) {
  ExperimentRun run;
  run.config = config;
  run.objective = make_objective(config.function);
  const Vector x0 = starting_point(config, *run.objective);
  run.trace = run_descent(*run.objective, x0, config.eps_schedule, config.delta_schedule, config.descent);
  return run;
}

std::string rate_report_json(const RateReport& report, int p) {
  ordered_json j;
  j["p"] = p;
  j["M_fit"] = report.M_fit;
  j["crossover_j"] = report.crossover_j ? json(*report.crossover_j) : json(nullptr);
  j["violations"] = report.violations;
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"j", e.j}, {"distance", e.distance}, {"bound", e.bound}, {"ratio", e.ratio},
                       {"binding", to_string(e.binding)}});
  }
  j["entries"] = entries;
  return j.dump(2);
}

void write_run_outputs(const ExperimentRun& run, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream csv;
  write_trace_csv(csv, run.trace);
  write_text(dir / "trace.csv", csv.str());

  const auto& meta = run.objective->metadata();
  ordered_json m;
  m["config"] = ordered_json::parse(config_to_json(run.config));
  m["seeds"] = {{"approx_seed", run.config.descent.approx.seed},
                {"per_call", "derive_seed(approx_seed, l, attempt)"}};
  m["terminal_status"] = to_string(run.trace.status);
  m["diagnostic"] = run.trace.diagnostic;
  m["oracle_calls"] = run.trace.oracle_calls;
  m["inner_records"] = run.trace.inner.size();
  m["columns"] = trace_columns(run.objective->dim());
  ordered_json outer = ordered_json::array();
  for (const auto& o : run.trace.outer) {
    ordered_json e = {{"j", o.j}, {"N_j", o.N}, {"eps_j", o.eps}, {"delta_j", o.delta}, {"norm_v", o.norm_v}};
    if (meta) e["distance"] = (o.x - meta->x_star).norm();
    outer.push_back(e);
  }
  m["outer"] = outer;
  write_text(dir / "manifest.json", m.dump(2) + "\n");

  if (meta && meta->order) {
    RateOptions opt;
    if (run.trace.outer.size() < static_cast<std::size_t>(opt.transient_skip) + 3) opt.transient_skip = 0;
    if (run.trace.outer.size() >= static_cast<std::size_t>(opt.transient_skip) + 3) {
      const RateReport rep = check_rate_bound(run.trace.outer, meta->x_star, *meta->order, opt);
      write_text(dir / "rate_report.json", rate_report_json(rep, *meta->order) + "\n");
    }
  }
}

std::string verify_function(const std::string& function_id, const std::vector<std::string>& checks,
                            std::uint64_t seed) {
  const ObjectivePtr f = make_objective(function_id);
  const auto& meta = f->metadata();
  ordered_json report;
  report["function"] = f->name();
  ordered_json results = ordered_json::object();

  for (const auto& check : checks) {
    ordered_json r;
    if (!meta) {
      r["status"] = "skipped";
      r["reason"] = "no known minimizer";
      results[check] = r;
      continue;
    }
    if (check == "growth") {
      const GrowthFit fit = fit_growth_order(*f, meta->x_star, meta->growth_radius, 20000, seed, meta->f_star);
      r["p_hat"] = fit.p_hat;
      r["beta_hat"] = fit.beta_hat;
      r["residual"] = fit.residual;
      r["finite_order"] = fit.finite_order;
      r["slope_inner"] = fit.slope_inner;
      r["slope_outer"] = fit.slope_outer;
      r["samples"] = fit.sample_count;
      if (meta->order) {
        r["expected_p"] = *meta->order;
        r["status"] = fit.finite_order && std::abs(fit.p_hat - *meta->order) <= 0.2 ? "pass" : "flag";
      } else {
        r["expected_p"] = nullptr;
        r["status"] = fit.finite_order ? "flag" : "pass";
        r["reason"] = "minimum has no finite order";
      }
    } else if (check == "semismooth") {
      if (!meta->order) {
        r["status"] = "skipped";
        r["reason"] = "no growth order to test against";
        results[check] = r;
        continue;
      }
      const int p = *meta->order;
      const auto n = meta->x_star.size();
      ScanOptions opt;
      opt.seed = seed;
      double worst = std::numeric_limits<double>::infinity();
      ordered_json scans = ordered_json::array();
      for (Eigen::Index i = 0; i < n && i < 8; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Vector d = Vector::Zero(n);
          d(i) = sgn;
          const RatioScan s = semismooth_ratio_scan(*f, meta->x_star, d, p, opt);
          worst = std::min(worst, s.min_ratio);
          scans.push_back({{"direction_axis", i + 1}, {"sign", sgn}, {"min_ratio", s.min_ratio}, {"argmin_t", s.argmin_t}});
        }
      }
      r["p"] = p;
      r["scans"] = scans;
      r["min_ratio"] = worst;
      const double floor = meta->beta ? 0.5 * *meta->beta : 1e-9;
      r["status"] = worst >= floor ? "pass" : "flag";
      if (worst < 0.0) r["reason"] = "negative ratio: the higher-order semismoothness inequality fails";
    } else if (check == "convexity") {
      if (!f->is_piecewise() || !meta->order) {
        r["status"] = "skipped";
        r["reason"] = !f->is_piecewise() ? "no selection functions" : "no growth order";
        results[check] = r;
        continue;
      }
      const ConvexityReport rep = selection_convexity_check(*f, meta->x_star, *meta->order, 64, 1e-6, seed);
      if (rep.skipped) {
        r["status"] = "skipped";
        r["reason"] = rep.reason;
      } else {
        bool any = false;
        ordered_json sel = ordered_json::array();
        for (const auto& s : rep.selections) {
          any = any || s.violates;
          sel.push_back({{"index", s.index},
                         {"directions_in_cone", s.directions_in_cone},
                         {"min_term", s.min_term},
                         {"violates", s.violates}});
        }
        r["selections"] = sel;
        r["status"] = any ? "flag" : "pass";
      }
    } else {
      fail(ErrorCode::Configuration, "unknown check '" + check + "'");
    }
    results[check] = r;
  }
  report["checks"] = results;
  return report.dump(2);
}

std::vector<CriterionResult> reproduce(const std::string& target, const std::filesystem::path& dir,
                                       std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  if (target == "figA4") return reproduce_figA4(dir);
  if (target == "fig4") return reproduce_fig4(dir, seed);
  if (target == "fig5") return reproduce_fig5(dir, seed);
  if (target == "fig6") return reproduce_fig6(dir);
  if (target == "exampleA3") return reproduce_exampleA3(dir);
  fail(ErrorCode::Configuration, "unknown reproduce target '" + target + "'");
}

std::vector<std::string> reproduce_targets() { return {"figA4", "fig4", "fig5", "fig6", "exampleA3"}; }

}  // namespace nsd
