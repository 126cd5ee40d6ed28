#pragma once

#include <cstddef>
#include <functional>

namespace wkg {

// Process-wide worker count (default: hardware concurrency, capped at 8).
int thread_count();
void set_thread_count(int n);

// Runs fn over [begin,end) split into exactly thread_count() contiguous
// chunks.  Chunk boundaries depend only on (begin,end,threads), so results
// assembled per-chunk are bitwise deterministic for a fixed thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace wkg
