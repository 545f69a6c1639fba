#ifndef MTAR_PARALLEL_HPP
#define MTAR_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mtar {

// Runs fn(0..n-1) across a fixed worker pool. Each index is claimed once;
// results must be written to per-index slots by the caller. The first
// exception, if any, is rethrown after all workers join.
inline void parallel_for(int n, int workers,
                         const std::function<void(int)>& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mtar

#endif  // MTAR_PARALLEL_HPP
