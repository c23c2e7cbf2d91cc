#pragma once

#include <cstddef>
#include <functional>

namespace rsk {

/// Worker cap: RSK_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t max_threads();

/// Runs body(i) for i in [0, n) on up to max_threads() threads. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rsk
