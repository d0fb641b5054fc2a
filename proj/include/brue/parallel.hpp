#pragma once

#include <cstddef>
#include <functional>

namespace brue {

/**
 * Calls fn(i) for every i in [0, count) on up to `jobs` threads. Work items
 * are claimed dynamically, so fn must write only to slot-indexed storage;
 * results are then independent of the thread count. The exception of the
 * lowest-indexed failing item is rethrown after all threads have joined.
 */
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Hardware concurrency, at least 1.
unsigned default_jobs();

} // namespace brue
