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

#include <cstddef>
#include <functional>

namespace rboost {

// Worker count used for intra-iteration parallelism: RBOOST_THREADS if set
// (clamped to >= 1), otherwise the hardware concurrency, never more than
// n_tasks.
std::size_t worker_count(std::size_t n_tasks);

// Runs fn(task, worker) for task in [0, n_tasks). Task t is handled by worker
// t % n_workers, so the task->worker mapping is fixed regardless of
// scheduling; per-worker scratch state therefore sees a deterministic task
// sequence. With n_workers == 1 everything runs on the calling thread.
void parallel_for(std::size_t n_tasks, std::size_t n_workers,
                  const std::function<void(std::size_t task, std::size_t worker)>& fn);

}  // namespace rboost
