#pragma once

#include <cstddef>
#include <functional>

namespace horocauchy {

/// Worker count: HOROCAUCHY_THREADS if set and positive, capped by the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Exceptions are rethrown
/// (the one from the lowest index wins) after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace horocauchy
