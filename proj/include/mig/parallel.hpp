#pragma once

#include <cstddef>
#include <functional>

namespace mig {

/// Worker count: `requested` if non-zero, else MIG_THREADS if set and non-zero,
/// else the hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace mig
