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

#ifndef NSD_TEST_FUNCTIONS_HPP
#define NSD_TEST_FUNCTIONS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "nsd/objective.hpp"

namespace nsd {

enum class TestFunctionKind {
  Ex3_1,            // max(exp(-1/x1^2), |x2|)
  Ex3_2,            // x^2 sin(1/x) + |x|
  Ex3_3,            // x^(p+1) sin(1/x) + |x|^p / p
  CubicMax4,        // max of four cubic pieces, minimum of order 3
  Crescent,         // max(f1, f2), nonconvex selection f2
  PowMax,           // max(|x1|^p / p, |x2|)
  MaxQ,             // max_i x_i^2
  NesterovMaxQuad,  // max_i x_i + ||x||^2 / 2
  Abs,              // |x|
};

struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::Abs;
  int parameter = 0;  // p for Ex3_3/PowMax, n for MaxQ/NesterovMaxQuad

  /// Canonical string id, e.g. "maxq:10".
  std::string id() const;
};

/// Parses ids such as "abs", "maxq:10", "nesterov:100", "powmax:3",
/// "crescent", "ex3_1", "ex3_2", "ex3_3:2", "cubicmax4". Throws
/// Configuration on unknown ids or bad parameters.
TestFunction parse_test_function(std::string_view id);

ObjectivePtr make_objective(const TestFunction& fn);
ObjectivePtr make_objective(std::string_view id);

struct TestFunctionInfo {
  std::string id;
  std::string formula;
  bool parametrized = false;
};

const std::vector<TestFunctionInfo>& test_function_catalog();

}  // namespace nsd

#endif  // NSD_TEST_FUNCTIONS_HPP
