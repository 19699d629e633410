#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace spreadlab {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs body(r) for r in [0, count).  Each replicate owns its RNG streams, so
// the partition across threads does not affect results.
inline void parallel_replicates(std::uint64_t count, unsigned threads,
                                const std::function<void(std::uint64_t)>& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    for (std::uint64_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t r = next.fetch_add(1);
        if (r >= count) return;
        body(r);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace spreadlab
