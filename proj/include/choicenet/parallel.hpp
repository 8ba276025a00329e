#pragma once

#include <cstddef>
#include <functional>

namespace choicenet {

// Worker count resolution: explicit value > CHOICENET_WORKERS env var >
// hardware concurrency. 0 means "resolve".
std::size_t resolve_workers(std::size_t requested);

// Runs fn(0..n-1) on up to `workers` threads pulling indices from a shared
// counter. Blocks until all complete; the first exception thrown by any task
// is rethrown after the join. Task results must be written to pre-sized
// slots indexed by i so the outcome is independent of scheduling.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace choicenet
