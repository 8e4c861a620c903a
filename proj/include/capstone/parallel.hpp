#pragma once

#include <cstddef>
#include <functional>

namespace capstone {

/// Worker count: hardware concurrency, capped by CAPSTONE_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [begin, end) on up to worker_count() threads.
/// Iterations are split into contiguous blocks; body must be safe to call concurrently.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace capstone
