#include "visnerf/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace visnerf {

void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn) {
  const int n = end - begin;
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  if (threads > n) threads = n;
  const int chunk = (n + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const int lo = begin + t * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

int thread_count_from_env(int fallback) {
  const char* s = std::getenv("VISNERF_THREADS");
  if (!s) return fallback;
  const int v = std::atoi(s);
  return v >= 1 ? v : fallback;
}

}  // namespace visnerf
