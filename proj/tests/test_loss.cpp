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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rboost/loss.hpp"

using namespace rboost;

TEST_CASE("softmax_row: uniform, ln2, and overflow-safe cases") {
  const auto uniform = softmax_row(std::vector<double>{0.0, 0.0, 0.0});
  for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-15));

  const auto two_thirds = softmax_row(std::vector<double>{std::log(2.0), 0.0});
  CHECK(two_thirds[0] == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(two_thirds[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));

  const auto extreme = softmax_row(std::vector<double>{1000.0, 0.0});
  CHECK(std::isfinite(extreme[0]));
  CHECK(std::isfinite(extreme[1]));
  CHECK(extreme[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extreme[1] <= 1e-300);

  // shift invariance
  const auto base = softmax_row(std::vector<double>{0.3, -1.2, 2.0});
  const auto shifted = softmax_row(std::vector<double>{0.3 + 7, -1.2 + 7, 2.0 + 7});
  for (int k = 0; k < 3; ++k) {
    CHECK(base[k] == doctest::Approx(shifted[k]).epsilon(1e-14));
  }
}

TEST_CASE("softmax rows sum to one") {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss(0.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> f(4);
    for (double& v : f) v = gauss(rng);
    const auto p = softmax_row(f);
    double sum = 0;
    for (double v : p) {
      CHECK(v > 0.0);
      CHECK(v < 1.0 + 1e-15);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("total_loss: worked values") {
  Matrix perfect(2, 3, 0.0);
  perfect(0, 1) = 1.0;
  perfect(1, 2) = 1.0;
  CHECK(total_loss(perfect, std::vector<int>{1, 2}) == 0.0);

  Matrix uniform(3, 10, 0.1);
  CHECK(total_loss(uniform, std::vector<int>{0, 5, 9}) ==
        doctest::Approx(3.0 * std::log(10.0)).epsilon(1e-14));

  Matrix half(1, 2, 0.5);
  CHECK(total_loss(half, std::vector<int>{0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("grads_plain: direct substitutions") {
  CHECK(grads_plain(1.0, 0.3).g == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(grads_plain(1.0, 0.3).h == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(grads_plain(0.0, 0.3).g == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(grads_plain(0.0, 0.3).h == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(grads_plain(1.0, 1.0).g == 0.0);
  CHECK(grads_plain(1.0, 1.0).h == 0.0);
}

TEST_CASE("grads_abc: direct substitutions") {
  // uniform K=3, true class k, base b != k
  const GradPair uniform = grads_abc(0.0, 1.0 / 3, 1.0, 1.0 / 3);
  CHECK(uniform.g == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(uniform.h == doctest::Approx(2.0 / 3).epsilon(1e-14));

  const GradPair mixed = grads_abc(0.0, 0.5, 1.0, 0.25);
  CHECK(mixed.g == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(mixed.h == doctest::Approx(0.6875).epsilon(1e-15));

  // vanishing base probability reduces to the plain second derivative
  const GradPair degenerate = grads_abc(0.0, 0.0, 1.0, 0.3);
  CHECK(degenerate.h == doctest::Approx(0.3 * 0.7).epsilon(1e-15));
}

TEST_CASE("plain gradients match central differences of the loss") {
  std::mt19937 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.5);
  std::uniform_int_distribution<int> klass(0, 3);
  const double eps = 1e-5;
  for (int t = 0; t < 30; ++t) {
    std::vector<double> f(4);
    for (double& v : f) v = gauss(rng);
    const int y = klass(rng);
    const auto p = softmax_row(f);
    for (std::size_t k = 0; k < 4; ++k) {
      const double fd = oracle::fd_first_plain(f, y, k, eps);
      const double r = (static_cast<int>(k) == y) ? 1.0 : 0.0;
      // fd approximates dL/dF_k = -(r - p)
      CHECK(std::abs(fd + grads_plain(r, p[k]).g) <= 1e-6);
    }
  }
}

TEST_CASE("abc gradients match sum-to-zero finite differences") {
  std::mt19937 rng(43);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> klass(0, 3);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n_classes = 4;
    const std::size_t base = static_cast<std::size_t>(t) % n_classes;
    std::vector<double> free_scores(n_classes - 1);
    for (double& v : free_scores) v = gauss(rng);
    const int y = klass(rng);

    // assemble the full score vector and probabilities
    std::vector<double> f(n_classes, 0.0);
    double sum = 0.0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < n_classes; ++k) {
      if (k == base) continue;
      f[k] = free_scores[at++];
      sum += f[k];
    }
    f[base] = -sum;
    const auto p = softmax_row(f);

    at = 0;
    for (std::size_t k = 0; k < n_classes; ++k) {
      if (k == base) continue;
      const double r_b = (static_cast<int>(base) == y) ? 1.0 : 0.0;
      const double r_k = (static_cast<int>(k) == y) ? 1.0 : 0.0;
      const GradPair d = grads_abc(r_b, p[base], r_k, p[k]);
      const double fd1 = oracle::fd_first_abc(free_scores, y, base, at, 1e-5);
      const double fd2 = oracle::fd_second_abc(free_scores, y, base, at, 1e-4);
      CHECK(std::abs(fd1 - (-d.g)) <= 1e-4);
      CHECK(std::abs(fd2 - d.h) <= 1e-4);
      ++at;
    }
  }
}

TEST_CASE("hessian_diagnostics: uniform point") {
  const std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (int base = 0; base < 3; ++base) {
    const auto dets = hessian_diagnostics(uniform, base);
    CHECK(std::abs(dets.full_det) <= 1e-12);
    CHECK(dets.reduced_det == doctest::Approx(1.0 / 3).epsilon(1e-14));
  }
}

TEST_CASE("hessian_diagnostics: base invariance and polynomial identity") {
  std::mt19937 rng(91);
  for (int t = 0; t < 1000; ++t) {
    const auto p = oracle::random_simplex3(rng);
    const std::vector<double> pv(p.begin(), p.end());
    const auto d0 = hessian_diagnostics(pv, 0);
    const auto d1 = hessian_diagnostics(pv, 1);
    const auto d2 = hessian_diagnostics(pv, 2);
    CHECK(std::abs(d0.full_det) <= 1e-12);
    CHECK(std::abs(d0.reduced_det - d1.reduced_det) <= 1e-12);
    CHECK(std::abs(d0.reduced_det - d2.reduced_det) <= 1e-12);
    const double poly = oracle::reduced_det_polynomial(p[0], p[1], p[2]);
    CHECK(std::abs(d0.reduced_det - poly) <= 1e-12);
  }
}

TEST_CASE("hessian_diagnostics: input validation") {
  CHECK_THROWS_AS((void)hessian_diagnostics(std::vector<double>{0.5, 0.5}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)hessian_diagnostics(std::vector<double>{0.5, 0.4, 0.2}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)hessian_diagnostics(std::vector<double>{0.5, 0.6, -0.1}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)hessian_diagnostics(std::vector<double>{0.3, 0.3, 0.4}, 3),
                  std::invalid_argument);
}
