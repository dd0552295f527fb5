#pragma once

#include <cstddef>
#include <functional>

namespace simplexconf {

// Worker count: SIMPLEXCONF_THREADS when set, hardware parallelism
// otherwise, always at least one.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) on a pool of workers. Tasks must be
// independent; any task exception is rethrown after the pool drains.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace simplexconf
