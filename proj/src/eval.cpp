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

#include "rboost/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rboost/errors.hpp"

namespace rboost {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

long long misclassification_count(std::span<const int> predictions,
                                  std::span<const int> truth) {
  if (predictions.size() != truth.size()) {
    throw std::invalid_argument("misclassification_count: length mismatch");
  }
  long long errors = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    errors += predictions[i] != truth[i];
  }
  return errors;
}

double pvalue_two_proportion(long long err_a, long long err_b, long long n_test) {
  if (n_test < 1) throw std::invalid_argument("pvalue_two_proportion: n_test must be >= 1");
  if (err_a < 0 || err_a > n_test || err_b < 0 || err_b > n_test) {
    throw std::invalid_argument("pvalue_two_proportion: error counts must be in [0, n_test]");
  }
  const auto n = static_cast<double>(n_test);
  const double pa = static_cast<double>(err_a) / n;
  const double pb = static_cast<double>(err_b) / n;
  const double variance = pa * (1.0 - pa) / n + pb * (1.0 - pb) / n;
  if (variance <= 0.0) {
    throw std::invalid_argument("pvalue_two_proportion: zero variance (degenerate counts)");
  }
  const double z = (pa - pb) / std::sqrt(variance);
  // 1 - Phi(z), in the complementary form that stays accurate for large z.
  const double p = 0.5 * std::erfc(z / std::sqrt(2.0));
  if (p < 1e-300) return 0.0;
  // erfc saturates at 2 for very negative z; keep the result below 1.
  if (p >= 1.0) return std::nextafter(1.0, 0.0);
  return p;
}

double relative_improvement(long long err_base, long long err_new) {
  if (err_base <= 0) {
    throw std::invalid_argument("relative_improvement: err_base must be > 0");
  }
  return static_cast<double>(err_base - err_new) / static_cast<double>(err_base);
}

void emit_curves(const MetricLog& log, const std::filesystem::path& path) {
  if (log.rows.empty()) throw std::invalid_argument("emit_curves: empty metric log");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write curve file: " + path.string());
  out << "iteration,train_loss,test_errors,seconds\n";
  char buf[128];
  for (const MetricRow& row : log.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%lld,%.17g\n", row.iteration,
                  row.train_loss, row.test_errors, row.seconds);
    out << buf;
  }
  if (!out) throw DataError("error writing curve file: " + path.string());
}

}  // namespace rboost
