// SPDX-License-Identifier: Apache-2.0
#include "emskin/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace emskin {
namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned n) { g_max_threads.store(n); }

unsigned max_threads() {
  const unsigned requested = g_max_threads.load();
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace emskin
