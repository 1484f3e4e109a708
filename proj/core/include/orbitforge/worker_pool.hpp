#pragma once

#include <cstddef>
#include <functional>

namespace orbitforge {

// Worker count from ORBITFORGE_THREADS, falling back to the hardware
// concurrency; always at least 1.
std::size_t default_threads();

// Calls task(i) for every i in [0, n) on up to `threads` threads. Each index
// runs exactly once; the first exception thrown by any task is rethrown
// after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& task);

}  // namespace orbitforge
