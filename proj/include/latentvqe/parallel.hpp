#pragma once

#include <cstddef>
#include <functional>

namespace latentvqe {

/// Worker count: LATENTVQE_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to worker_count() threads. fn must only
/// touch data owned by index i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace latentvqe
