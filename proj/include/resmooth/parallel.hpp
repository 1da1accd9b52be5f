#pragma once

#include <cstddef>
#include <functional>

namespace resmooth {

// Worker cap from RESMOOTH_THREADS (default 1). Parallel sections write
// results into per-index slots, so the outcome is identical for any cap.
int worker_threads();

// Runs fn(i) for i in [0, n), split across worker_threads() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace resmooth
