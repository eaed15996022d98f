// SPDX-License-Identifier: Apache-2.0
// Worker pool size and a block-parallel loop whose partition does not depend
// on the number of threads, so reductions done per block are bit-stable.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rsm {

void set_thread_count(int n);
int thread_count();

// Calls body(block_index, lo, hi) for consecutive blocks [lo, hi) of [0, n).
template <class F>
void parallel_blocks(std::size_t n, std::size_t block, F&& body) {
  if (n == 0) return;
  const std::size_t nblocks = (n + block - 1) / block;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), nblocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) body(b, b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        body(b, b * block, std::min(n, (b + 1) * block));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rsm
