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

#include "rboost/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rboost {

void softmax_row(std::span<const double> scores, std::span<double> probs_out) {
  const double peak = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    probs_out[k] = std::exp(scores[k] - peak);
    sum += probs_out[k];
  }
  for (std::size_t k = 0; k < scores.size(); ++k) probs_out[k] /= sum;
}

std::vector<double> softmax_row(std::span<const double> scores) {
  std::vector<double> probs(scores.size());
  softmax_row(scores, probs);
  return probs;
}

double total_loss(const Matrix& probs, std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    loss -= std::log(probs(i, static_cast<std::size_t>(labels[i])));
  }
  return loss;
}

GradPair grads_plain(double r, double p) { return {r - p, p * (1.0 - p)}; }

GradPair grads_abc(double r_b, double p_b, double r_k, double p_k) {
  return {(r_k - p_k) - (r_b - p_b),
          p_b * (1.0 - p_b) + p_k * (1.0 - p_k) + 2.0 * p_b * p_k};
}

HessianDeterminants hessian_diagnostics(std::span<const double> p, int base) {
  if (p.size() != 3) {
    throw std::invalid_argument("hessian_diagnostics: needs exactly 3 probabilities");
  }
  if (base < 0 || base > 2) {
    throw std::invalid_argument("hessian_diagnostics: base must be 0, 1, or 2");
  }
  double sum = 0.0;
  for (double v : p) {
    if (v < -1e-9 || v > 1.0 + 1e-9) {
      throw std::invalid_argument("hessian_diagnostics: probability outside [0,1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("hessian_diagnostics: probabilities must sum to 1");
  }

  auto full = [&](int j, int k) {
    return j == k ? p[j] * (1.0 - p[j]) : -p[j] * p[k];
  };
  const double full_det = full(0, 0) * (full(1, 1) * full(2, 2) - full(1, 2) * full(2, 1)) -
                          full(0, 1) * (full(1, 0) * full(2, 2) - full(1, 2) * full(2, 0)) +
                          full(0, 2) * (full(1, 0) * full(2, 1) - full(1, 1) * full(2, 0));

  const int j = (base == 0) ? 1 : 0;
  const int k = (base == 2) ? 1 : 2;
  const double pb = p[base];
  const double hj = grads_abc(0.0, pb, 0.0, p[j]).h;
  const double hk = grads_abc(0.0, pb, 0.0, p[k]).h;
  const double off = pb - pb * pb + pb * p[j] + pb * p[k] - p[j] * p[k];
  const double reduced_det = hj * hk - off * off;

  return {full_det, reduced_det};
}

}  // namespace rboost
