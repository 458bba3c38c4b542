#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gensplat {

// Worker count, bounded by the GENSPLAT_THREADS environment variable.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  n = std::min(n, 8);
  if (const char* env = std::getenv("GENSPLAT_THREADS")) {
    int bound = std::atoi(env);
    if (bound >= 1) n = std::min(n, bound);
  }
  return n;
}

// Static chunked parallel for. Chunk assignment depends only on the worker
// count, so results of ordered per-worker reductions are reproducible for a
// fixed GENSPLAT_THREADS.
inline void parallel_for(int begin, int end, const std::function<void(int, int)>& body_worker) {
  const int n = end - begin;
  if (n <= 0) return;
  int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body_worker(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, w, &body_worker] {
      for (int i = lo; i < hi; ++i) body_worker(i, w);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gensplat
