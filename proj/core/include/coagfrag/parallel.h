#pragma once

#include <cstddef>
#include <functional>

namespace coagfrag {

// Worker cap: COAGFRAG_THREADS if set to a positive integer, else hardware concurrency.
std::size_t worker_count();

// Calls fn(i) for i in [0, n), split into contiguous chunks across workers.
// Exceptions thrown by fn are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace coagfrag
