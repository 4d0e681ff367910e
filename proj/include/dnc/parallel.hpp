#pragma once

// Static-chunk parallel loops. Work is split into contiguous index ranges and
// every caller reduces per-index or per-chunk results in index order, so the
// output never depends on the thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dnc {

namespace detail {

inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{0};
  return value;
}

}  // namespace detail

/// Number of worker threads: set_thread_count(), else DNC_THREADS, else the
/// hardware concurrency.
inline unsigned thread_count() {
  if (unsigned v = detail::thread_setting().load(); v > 0) return v;
  if (const char* env = std::getenv("DNC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void set_thread_count(unsigned threads) { detail::thread_setting().store(threads); }

/// Calls fn(begin, end) on disjoint contiguous ranges covering [0, count).
/// If several ranges throw, the exception from the lowest range is rethrown.
template <typename Fn>
void parallel_ranges(std::size_t count, Fn&& fn, unsigned threads = thread_count()) {
  if (count == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// out[i] = fn(i) for i in [0, count).
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn, unsigned threads = thread_count()) {
  std::vector<T> out(count);
  parallel_ranges(
      count,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
      },
      threads);
  return out;
}

}  // namespace dnc
