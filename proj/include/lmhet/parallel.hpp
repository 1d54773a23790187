#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lmhet::detail {

inline int resolve_threads(int n_threads) {
  if (n_threads > 0) return n_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Run fn(task) for task = 0..n_tasks-1 on a small worker pool.  Workers pull
// task indices from a shared counter, so the mapping of tasks to threads is
// arbitrary; callers must write results into per-task slots (or commutative
// integer accumulators) to stay deterministic.  The first exception thrown
// by any task is rethrown after the pool drains.
inline void parallel_for(std::int64_t n_tasks, int n_threads,
                         const std::function<void(std::int64_t)>& fn) {
  if (n_tasks <= 0) return;
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(n_threads), n_tasks));
  if (workers <= 1) {
    for (std::int64_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::int64_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= n_tasks) break;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace lmhet::detail
