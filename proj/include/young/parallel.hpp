#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "young/grid_path.hpp"

namespace young {

// Static block partition over [0, n). Work items write to caller-owned
// slots indexed by i, so results are identical for any thread count;
// aggregation happens afterwards in index order.
inline void parallel_for(Index n, int threads,
                         const std::function<void(Index)>& fn) {
  if (n <= 0) return;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (threads == 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const Index block = (n + threads - 1) / threads;
  auto run_block = [&](Index begin, Index end) {
    try {
      for (Index i = begin; i < end && i < n; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t)
    pool.emplace_back(run_block, t * block, (t + 1) * block);
  run_block(0, block);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace young
