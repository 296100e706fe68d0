#pragma once

// Bounded worker pool for independent jobs. Results are written by index,
// so aggregation order never depends on scheduling.

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bicap {

/// BICAP_THREADS if set and positive, otherwise the hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("BICAP_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs job(i) for i in [0, n). The first exception thrown by any job is
/// rethrown after all workers have stopped.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bicap
