// Copyright 2026 The Quench Authors.
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

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace quench {

/// Worker count from QUENCH_WORKERS, falling back to hardware concurrency.
inline int default_worker_count() {
  if (const char* env = std::getenv("QUENCH_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

/// Runs body(0..n_jobs-1) across n_workers threads. Jobs must be independent;
/// results should land in preassigned slots so the outcome is order-free.
inline void parallel_for(std::size_t n_jobs, int n_workers,
                         const std::function<void(std::size_t)>& body) {
  if (n_jobs == 0) return;
  if (n_workers < 1) n_workers = 1;
  const int threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(n_workers), n_jobs));
  if (threads == 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_jobs || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load() && first_error) std::rethrow_exception(first_error);
}

}  // namespace quench
