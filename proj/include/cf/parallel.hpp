#pragma once

#include <functional>

namespace cf {

// Worker count: COMBING_FORGE_THREADS if set (>= 1), else hardware concurrency.
int thread_count();

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunk boundaries depend
// only on n and the thread count; callers write to disjoint slots.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace cf
