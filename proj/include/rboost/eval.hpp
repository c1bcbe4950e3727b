// Copyright 2026 The RBoost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <span>

#include "rboost/booster.hpp"

namespace rboost {

// Standard normal CDF via erfc; absolute error well below 1e-12 for |z| <= 8.
double normal_cdf(double z);

long long misclassification_count(std::span<const int> predictions,
                                  std::span<const int> truth);

// One-sided two-proportion z-test that the second error count is
// significantly lower: z = (pa - pb) / sqrt(pa(1-pa)/n + pb(1-pb)/n),
// P = 1 - Phi(z). Equal counts give exactly 0.5. Values below 1e-300 are
// reported as 0; saturation at the other end is capped just below 1.
// Zero-variance inputs (both counts 0 or both n) throw std::invalid_argument.
double pvalue_two_proportion(long long err_a, long long err_b, long long n_test);

// (err_base - err_new) / err_base as a signed fraction; err_base must be > 0.
double relative_improvement(long long err_base, long long err_new);

// Writes "iteration,train_loss,test_errors,seconds" CSV rows; reals carry 17
// significant digits so parsing the file reproduces the log exactly.
void emit_curves(const MetricLog& log, const std::filesystem::path& path);

}  // namespace rboost
