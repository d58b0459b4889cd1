#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ddp {

// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks,
// one per worker. Callers must write results into preallocated per-index
// slots and reduce sequentially afterwards; that keeps every artifact
// byte-identical no matter how many workers run.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t w = std::size_t(workers);
  if (w > n) w = n;
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ddp
