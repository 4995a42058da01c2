#pragma once

#include <functional>

namespace svgd {

// Worker count resolution: explicit request > THREADS env > hardware.
int resolve_threads(int requested = 0);

// Static contiguous partition of [0, n); fn(begin, end) per chunk.
// Outputs written to disjoint index ranges are identical for any
// worker count; reductions must be done by the caller in index order.
void parallel_for(int n, int threads, const std::function<void(int, int)>& fn);

}  // namespace svgd
