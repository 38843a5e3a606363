#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace segsig {

/// Runs body(i) for i in [0, count) on up to `threads` workers.
///
/// Work is strided by index and every result must land in an index-addressed
/// slot owned by the caller, so outputs are identical for any thread count.
/// threads == 0 means hardware concurrency.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace segsig
