#pragma once

#include <cstddef>
#include <functional>

namespace lltorus {

// Worker count: LLTORUS_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on worker_count() threads.  The first exception
// thrown by any body is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lltorus
