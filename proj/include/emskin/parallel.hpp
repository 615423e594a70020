// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace emskin {

/// Upper bound on worker threads used by the engines. 0 restores the
/// hardware default.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, count) over contiguous chunks. Each index is
/// visited exactly once, so writes to disjoint slots are deterministic
/// regardless of the thread count. The first exception thrown is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t min_chunk = 1) {
  const std::size_t workers_cap = max_threads();
  std::size_t workers = std::min<std::size_t>(workers_cap, (count + min_chunk - 1) / (min_chunk ? min_chunk : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (count + workers - 1) / workers;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace emskin
