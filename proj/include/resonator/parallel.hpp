#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace resonator::par {

// RESONANCE_THREADS, when set, is the thread budget (explicit user intent wins
// over the hardware count, including oversubscription). Unset or unparsable
// values fall back to the hardware count; the floor is always 1.
inline int thread_budget() {
  if (const char* env = std::getenv("RESONANCE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Work items must be independent; callers get
// determinism by writing to index-addressed slots. Exceptions from workers are
// rethrown on the calling thread (first one wins).
template <class F>
void parallel_for(long count, F&& fn) {
  int threads = thread_budget();
  if (threads <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = static_cast<int>(count);
  std::atomic<long> next{0};
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace resonator::par
