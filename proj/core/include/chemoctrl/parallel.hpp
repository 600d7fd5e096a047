#pragma once

#include <cstdint>
#include <functional>

namespace chemoctrl {

// Number of cell-parallel workers. Reads CHEMOCTRL_THREADS once (values < 1
// fall back to 1); the default is serial so results never depend on the host.
int worker_count();

// Test hook: override the worker count for the current process.
void set_worker_count(int n);

// Runs fn(begin, end) on disjoint chunks of [0, n), possibly on several
// threads. Callers must only write to indices inside their chunk; under that
// contract the result is bitwise identical for every worker count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace chemoctrl
