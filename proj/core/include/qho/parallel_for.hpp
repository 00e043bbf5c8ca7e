#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qho {

namespace detail {
inline std::atomic<unsigned>& thread_count_slot() {
  static std::atomic<unsigned> v{0};
  return v;
}
}  // namespace detail

// Process-wide worker count for the grid loops; 0 means hardware concurrency.
inline void set_thread_count(unsigned n) {
  detail::thread_count_slot().store(n, std::memory_order_relaxed);
}

// Raw configured value (0 = auto); lets callers save and restore the setting.
inline unsigned configured_thread_count() {
  return detail::thread_count_slot().load(std::memory_order_relaxed);
}

inline unsigned effective_threads() {
  const unsigned v = detail::thread_count_slot().load(std::memory_order_relaxed);
  if (v != 0) return v;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs fn(i) for i in [0, n).  Each index writes only its own outputs, so the
// result is bitwise identical for every thread count, including 1.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    if (lo >= n) break;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qho
