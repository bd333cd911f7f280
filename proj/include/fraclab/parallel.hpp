#pragma once

// Row-parallel helper. Work is split into contiguous index blocks, one per
// thread, so results are bit-identical for every thread count (no shared
// reductions). FRACLAB_THREADS overrides the hardware default.

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fraclab {

inline int thread_count() {
  if (const char* env = std::getenv("FRACLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class F>
void parallel_for(int n, F&& body) {
  const int nt = std::min(thread_count(), std::max(1, n));
  if (nt <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const int chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fraclab
