#pragma once

#include <cstddef>
#include <functional>

namespace lbkld {

// Runs fn(0) ... fn(count-1) on up to `workers` threads.  Each index is
// claimed exactly once; callers keep determinism by writing results into
// per-index slots and seeding any randomness from the index, never from
// the executing thread.  The first exception thrown by any fn is rethrown
// after all threads join.  workers <= 1 runs inline.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

// Worker count for CLI runs: the LBKLD_WORKERS environment variable if
// set and positive, otherwise the hardware thread count.
std::size_t default_workers();

}  // namespace lbkld
