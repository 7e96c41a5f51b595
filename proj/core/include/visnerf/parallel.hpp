#pragma once

#include <functional>

namespace visnerf {

/// Runs fn(i) for i in [begin, end) on `threads` threads. Work is split
/// into contiguous chunks, one per thread, so a pure per-index computation
/// produces identical output for any thread count. threads <= 1 runs inline.
void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn);

/// Thread count from the VISNERF_THREADS environment variable, or
/// `fallback` when unset/invalid.
int thread_count_from_env(int fallback);

}  // namespace visnerf
