#pragma once

#include <cstddef>
#include <functional>

namespace spa {

// Worker-count cap: min(hardware concurrency, PARAMP_THREADS if set).
// Always at least 1.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks across
// threads; fn must write only to per-index storage so results are identical
// regardless of partitioning.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace spa
