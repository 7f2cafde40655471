#pragma once

#include <cstddef>
#include <functional>

namespace sparsedom {

/// Worker count used by parallel_for; 0 selects std::thread::hardware_concurrency().
void set_thread_count(int threads);
int thread_count();

/**
 * Runs body(i) for i in [0, n) split into contiguous chunks, one per worker.
 * Bodies must only write to slots owned by their own index, which keeps results
 * independent of scheduling.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sparsedom
