// SPDX-License-Identifier: Apache-2.0
#include "rsm/parallel.hpp"

#include "rsm/errors.hpp"

namespace rsm {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) {
  if (n < 1) throw DomainError("thread count must be >= 1");
  g_threads = n;
}

int thread_count() { return g_threads; }

}  // namespace rsm
