#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fastmmd {

/// Worker cap. Results never depend on it: work is split into fixed items
/// and every reduction runs in item order afterwards.
struct Parallelism {
  int threads = 1;
};

/// Calls `fn(begin, end)` over contiguous ranges covering [0, n).
/// The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Parallelism par, Fn&& fn) {
  if (n <= 0) return;
  const auto workers =
      static_cast<std::ptrdiff_t>(std::clamp<std::ptrdiff_t>(par.threads, 1, n));
  if (workers == 1) {
    fn(std::ptrdiff_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    const std::ptrdiff_t begin = n * w / workers;
    const std::ptrdiff_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace fastmmd
