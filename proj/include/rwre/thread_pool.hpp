#pragma once

// Minimal deterministic work sharing: run fn(0..count-1) on up to `threads`
// workers.  Each index is claimed once from an atomic counter; the callable
// must confine its writes to per-index slots so the result is independent of
// scheduling.  The first exception thrown by any worker is rethrown on the
// calling thread after all workers join.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rwre {

template <typename Fn>
void parallel_for_index(int64_t count, int64_t threads, Fn&& fn) {
  if (count <= 0) return;
  const int64_t workers = std::min(threads < 1 ? int64_t{1} : threads, count);
  if (workers == 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr firstError;
  std::mutex errorLock;

  const auto worker = [&] {
    for (;;) {
      const int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        fn(i);
      } catch (...) {
        {
          const std::lock_guard<std::mutex> hold(errorLock);
          if (!firstError) firstError = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (firstError) std::rethrow_exception(firstError);
}

}  // namespace rwre
