#pragma once

// Deterministic fan-out of independent work items. Each item writes only to
// its own output slot, so results do not depend on scheduling.

#include <cstddef>
#include <exception>
#include <functional>

namespace rebound {

/// Thread cap: REBOUND_THREADS when set, else hardware concurrency.
unsigned max_threads();
void set_max_threads(unsigned n); ///< 0 restores the default

/// Runs body(i) for i in [0, n); rethrows the first failure by index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace rebound
