#pragma once

#include <functional>

namespace dirollout {

// Static contiguous partition of [begin, end) across `workers` threads.
// Each index is processed exactly once; callers write disjoint slots, so
// results do not depend on the worker count. The first exception thrown by
// any worker is rethrown after the join.
void parallel_for(int begin, int end, int workers,
                  const std::function<void(int)>& fn);

}  // namespace dirollout
