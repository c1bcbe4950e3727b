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

#include "rboost/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace rboost {

std::size_t worker_count(std::size_t n_tasks) {
  if (n_tasks <= 1) return n_tasks;
  std::size_t n = 0;
  if (const char* env = std::getenv("RBOOST_THREADS")) {
    n = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::min(n, n_tasks);
}

void parallel_for(std::size_t n_tasks, std::size_t n_workers,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n_tasks == 0) return;
  n_workers = std::min(std::max<std::size_t>(n_workers, 1), n_tasks);
  if (n_workers == 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t, 0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t t = w; t < n_tasks; t += n_workers) fn(t, w);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace rboost
