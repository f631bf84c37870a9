#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace amulab {

// Effective worker count: explicit request, else AMULAB_THREADS, else
// hardware concurrency. Always at least 1.
std::size_t effective_threads(std::size_t requested = 0);

// Runs fn(i) for i in [0, count). Work items are independent; callers
// store results by index so merged output does not depend on scheduling.
// The first exception thrown by any worker is rethrown on the caller.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& fn,
                         std::size_t threads = 0) {
  threads = effective_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace amulab
