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

#ifndef NSD_DESCENT_HPP
#define NSD_DESCENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsd/goldstein.hpp"
#include "nsd/objective.hpp"

namespace nsd {

/// Parameter sequence j -> value for j >= 1.
///   Geometric       a * kappa^j
///   SuperGeometric  a * kappa^(j^2)
///   Constant        a
///   Zero            0
///   Table           values[j - 1], exhausted past the end
struct Schedule {
  enum class Kind { Geometric, SuperGeometric, Constant, Zero, Table };

  Kind kind = Kind::Zero;
  double a = 0.0;
  double kappa = 0.0;
  std::vector<double> values;

  static Schedule geometric(double a, double kappa);
  static Schedule super_geometric(double a, double kappa);
  static Schedule constant(double a);
  static Schedule zero();
  static Schedule table(std::vector<double> values);

  /// Empty once a table runs out.
  std::optional<double> at(int j) const;
  void validate() const;
};

const char* to_string(Schedule::Kind kind) noexcept;

struct StepConfig {
  int max_doublings = 30;  // 0 is the fixed step t = eps / ||v||
};

struct StopConfig {
  int j_max = 60;
  long l_max = 100000;
  double eps_min = 1e-14;
};

struct ApproxConfig {
  ApproxMode mode = ApproxMode::Deterministic;
  int sample_count = 0;  // 0 means 2n
  std::uint64_t seed = 0;
  bool warm_start = false;
  ApproxCaps caps;
};

struct DescentConfig {
  double c = 0.9;
  ApproxConfig approx;
  StepConfig step;
  StopConfig stop;
};

/// One sufficient-approximation build at z^l = x^{j,i}. `t` is 0 when the stage ended.
struct InnerRecord {
  long l = 0;
  int j = 0;
  int i = 0;
  Vector x;
  double f = 0.0;
  double norm_v = 0.0;
  double t = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  std::size_t bundle_size = 0;
  std::uint64_t oracle_calls = 0;
  ApproxKind kind = ApproxKind::Failed;
};

/// x^j = x^{j,N_j} together with the certificate ||v|| <= delta_j.
struct OuterRecord {
  int j = 0;
  Vector x;
  int N = 0;
  double eps = 0.0;
  double delta = 0.0;
  double norm_v = 0.0;
};

enum class TerminalStatus { ReachedJMax, ReachedLMax, EpsBelowMin, ScheduleExhausted, AbortedApproxFailure };

const char* to_string(TerminalStatus status) noexcept;

struct DescentTrace {
  std::vector<InnerRecord> inner;
  std::vector<OuterRecord> outer;
  TerminalStatus status = TerminalStatus::ReachedJMax;
  std::string diagnostic;
  std::uint64_t oracle_calls = 0;
};

/// Largest t0 * 2^k, k <= max_doublings, reached by doubling from
/// t0 = eps / ||v|| while f(x + t v) <= f(x) - c t ||v||^2 keeps holding.
double expand_step(Oracle& oracle, const Vector& x, const Vector& v, double eps, double c, int max_doublings,
                   std::optional<double> fx = std::nullopt);

DescentTrace run_descent(const Objective& f, const Vector& x0, const Schedule& eps_schedule,
                         const Schedule& delta_schedule, const DescentConfig& config);

/// Column names of write_trace_csv for an n-dimensional run.
std::vector<std::string> trace_columns(std::size_t n);
void write_trace_csv(std::ostream& out, const DescentTrace& trace);

}  // namespace nsd

#endif  // NSD_DESCENT_HPP
