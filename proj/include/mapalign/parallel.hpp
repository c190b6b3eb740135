#pragma once

#include <cstddef>
#include <functional>

namespace mapalign {

// Worker count from MAPALIGN_WORKERS when set, otherwise hardware threads.
int default_workers();

// Runs fn(0..n-1) across up to `workers` threads. Order of execution is
// unspecified; callers keep determinism by writing to disjoint slots. The
// first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace mapalign
