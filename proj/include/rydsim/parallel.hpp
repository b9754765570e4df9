#pragma once

#include <cstddef>
#include <functional>

namespace rydsim {

/// Worker count: RYDSIM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) across worker threads. Work items must write
/// to disjoint outputs; the first exception thrown by any item is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rydsim
