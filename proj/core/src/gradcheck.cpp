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

#include "podep/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace podep {
namespace {

Real evaluate(const ScalarFunction& f) {
  TapeOptions options;
  options.check_finite = true;
  Tape tape(options);
  return f(tape).value().item();
}

}  // namespace

GradCheckResult finite_diff_check(ParameterSet& params, const ScalarFunction& f, Real step) {
  params.zero_grad();
  {
    TapeOptions options;
    options.check_finite = true;
    Tape tape(options);
    Var loss = f(tape);
    tape.backward(loss);
  }

  GradCheckResult result;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Parameter& param = params[p];
    for (std::size_t i = 0; i < param.value.size(); ++i) {
      const Real saved = param.value[i];
      param.value[i] = saved + step;
      const Real up = evaluate(f);
      param.value[i] = saved - step;
      const Real down = evaluate(f);
      param.value[i] = saved;

      const Real numeric = (up - down) / (2.0 * step);
      const Real analytic = param.grad[i];
      const Real err = std::abs(analytic - numeric) / std::max<Real>(1.0, std::abs(analytic) + std::abs(numeric));
      ++result.checked;
      if (result.checked == 1 || err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_parameter = param.name;
        result.worst_index = i;
        result.analytic = analytic;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace podep
