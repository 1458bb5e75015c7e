#pragma once

#include <cstddef>
#include <functional>

namespace curv4 {

/// Resolves a worker count: an explicit request wins, then CURV4_THREADS
/// (0 = auto), then the hardware concurrency.
unsigned worker_count(unsigned requested = 0);

/// Splits [0, n) into contiguous ranges and runs body(begin, end) on up to
/// `workers` threads.  Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace curv4
