// Copyright 2026 The fsqa Authors.
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

#ifndef FSQA_TESTS_SUPPORT_FINITE_DIFF_HPP_
#define FSQA_TESTS_SUPPORT_FINITE_DIFF_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "fsqa/tensor.hpp"

namespace fsqa::testing {

// Scalar function of a named set of tensors, re-evaluated from scratch on
// every call. Keeping the oracle on plain values makes it independent of
// the graph / backward machinery it is used to check.
using ScalarFn = std::function<double(const std::map<std::string, Tensor>&)>;

inline std::map<std::string, Tensor> central_differences(
    const ScalarFn& f, const std::map<std::string, Tensor>& values,
    double h = 1e-5) {
  std::map<std::string, Tensor> grads;
  std::map<std::string, Tensor> point = values;
  for (const auto& [name, tensor] : values) {
    Tensor g = Tensor::zeros(tensor.shape());
    for (Index i = 0; i < tensor.numel(); ++i) {
      const double original = point.at(name)[i];
      point.at(name)[i] = original + h;
      const double up = f(point);
      point.at(name)[i] = original - h;
      const double down = f(point);
      point.at(name)[i] = original;
      g[i] = (up - down) / (2.0 * h);
    }
    grads.emplace(name, std::move(g));
  }
  return grads;
}

// max_i |a_i - n_i| / max(|a_i|, |n_i|, floor)
inline double max_relative_error(const std::map<std::string, Tensor>& analytic,
                                 const std::map<std::string, Tensor>& numeric,
                                 double floor = 1e-4) {
  double worst = 0.0;
  for (const auto& [name, a] : analytic) {
    const Tensor& n = numeric.at(name);
    for (Index i = 0; i < a.numel(); ++i) {
      const double denom = std::max({std::abs(a[i]), std::abs(n[i]), floor});
      worst = std::max(worst, std::abs(a[i] - n[i]) / denom);
    }
  }
  return worst;
}

}  // namespace fsqa::testing

#endif  // FSQA_TESTS_SUPPORT_FINITE_DIFF_HPP_
