#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polydense {

/// Runs body(begin, end) over [0, count) split into contiguous chunks, one per
/// worker. Chunk boundaries depend only on count and workers, so any body that
/// writes to disjoint per-index slots produces identical output for every
/// worker count.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
  if (count == 0) return;
  workers = std::max(1u, workers);
  if (workers == 1 || count == 1) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t n = std::min<std::size_t>(workers, count);
  const std::size_t step = (count + n - 1) / n;
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t begin = 0; begin < count; begin += step) {
    const std::size_t end = std::min(count, begin + step);
    threads.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace polydense
