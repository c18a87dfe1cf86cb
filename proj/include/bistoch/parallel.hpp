#pragma once

#include <cstddef>
#include <functional>

namespace bistoch {

// Worker cap: BISTOCH_THREADS when set to a positive integer, otherwise the
// hardware parallelism (at least 1).
std::size_t thread_count();

// Runs fn(i) for i in [0, count) on up to `threads` workers. Indices are
// handed out dynamically; the first exception thrown by any call is rethrown
// after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace bistoch
