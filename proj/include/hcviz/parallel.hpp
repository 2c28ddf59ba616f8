#pragma once

#include <cstddef>
#include <functional>

namespace hcviz {

/// Number of workers for a `jobs` request; 0 means hardware concurrency.
unsigned resolve_jobs(unsigned jobs) noexcept;

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace hcviz
