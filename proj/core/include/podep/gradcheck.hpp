// Copyright 2026 The podep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <string>

#include "podep/tape.hpp"

namespace podep {

struct GradCheckResult {
  Real max_rel_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  Real analytic = 0.0;
  Real numeric = 0.0;
  std::size_t checked = 0;
};

// Builds a scalar on the given tape from the current parameter values.
using ScalarFunction = std::function<Var(Tape&)>;

// Compares backward() against central differences for every element of
// every parameter in `params`. The function must be deterministic. Relative
// error is |a - n| / max(1, |a| + |n|).
GradCheckResult finite_diff_check(ParameterSet& params, const ScalarFunction& f, Real step = 1e-5);

}  // namespace podep
