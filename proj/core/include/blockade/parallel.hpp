// parallel.hpp — Minimal data-parallel index loop

#pragma once

#include <cstddef>
#include <functional>

namespace blockade {

// Worker cap: BLOCKADE_LADDER_THREADS when set (>=1), otherwise the hardware
// concurrency. Read once per process.
std::size_t max_worker_threads();

// Runs fn(i) for i in [0, n) on up to max_worker_threads() threads. The caller
// guarantees that distinct indices touch disjoint state; results are identical
// for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace blockade
