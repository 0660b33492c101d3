#ifndef AOI_PARALLEL_HPP
#define AOI_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace aoi {

/// Worker count: AOI_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
unsigned worker_count();

/// Runs fn(0) .. fn(n - 1) across worker_count() threads. Each index runs
/// exactly once; callers write results into per-index slots so the outcome
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace aoi

#endif  // AOI_PARALLEL_HPP
