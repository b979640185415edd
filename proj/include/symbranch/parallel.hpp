#ifndef SYMBRANCH_PARALLEL_HPP
#define SYMBRANCH_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sbm {

// Worker cap: SYMBRANCH_THREADS if set, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n). Each index is executed exactly once; bodies
// must only write state owned by their index, so results are identical for
// any worker count. The first exception thrown by a body is rethrown on the
// caller's thread after all workers join.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const int workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::vector<std::thread> pool;
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::atomic<int> error_guard{0};
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n || failed.load(std::memory_order_relaxed)) return;
      try {
        body(i);
      } catch (...) {
        if (error_guard.fetch_add(1) == 0) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sbm

#endif
