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

#include <array>
#include <span>
#include <vector>

#include "rboost/matrix.hpp"

namespace rboost {

// p_k = exp(f_k - max_s f_s) / sum_s exp(f_s - max_s f_s). The max shift
// keeps every exponent <= 0, so arbitrarily large scores stay finite.
void softmax_row(std::span<const double> scores, std::span<double> probs_out);
std::vector<double> softmax_row(std::span<const double> scores);

// Negative log-likelihood: sum_i -log p_{i, y_i}.
double total_loss(const Matrix& probs, std::span<const int> labels);

struct GradPair {
  double g = 0.0;  // negative first derivative (the fitted response)
  double h = 0.0;  // second derivative, >= 0
};

// Multi-class logistic derivatives for one (sample, class):
// g = r - p, h = p(1 - p).
GradPair grads_plain(double r, double p);

// Derivatives under the sum-to-zero constraint with base class b:
// g = (r_k - p_k) - (r_b - p_b),
// h = p_b(1 - p_b) + p_k(1 - p_k) + 2 p_b p_k.
GradPair grads_abc(double r_b, double p_b, double r_k, double p_k);

struct HessianDeterminants {
  double full_det = 0.0;     // 3x3 unconstrained Hessian; identically 0
  double reduced_det = 0.0;  // 2x2 base-class Hessian; base-independent
};

// K=3 diagnostic: determinant of the full Hessian (diagonal p_k(1-p_k),
// off-diagonal -p_j p_k) and of the 2x2 Hessian over the two non-base
// classes. p must lie on the probability simplex within 1e-9.
HessianDeterminants hessian_diagnostics(std::span<const double> p, int base);

}  // namespace rboost
