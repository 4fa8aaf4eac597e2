#ifndef FGLM_PARALLEL_HPP
#define FGLM_PARALLEL_HPP

#include <functional>

#include "fglm/types.hpp"

namespace fglm {

// Number of worker threads parallel_for will use: the programmatic limit if
// set, else the FGLM_THREADS environment variable, else hardware concurrency.
Index thread_count();

// Programmatic override (0 restores the environment/hardware default).
void set_thread_limit(Index limit);

// Runs fn(i) for i in [begin, end) on up to thread_count() threads.  Work is
// split into contiguous blocks by index only, so the set of calls (and hence
// any output written to slot i) is identical for every thread count; callers
// must not make item i depend on the execution of item j.  The first exception
// thrown by any item is rethrown on the calling thread.
void parallel_for(Index begin, Index end, const std::function<void(Index)>& fn);

} // namespace fglm

#endif
