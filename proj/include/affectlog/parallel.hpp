#pragma once

#include <cstddef>
#include <functional>

namespace affectlog {

// Worker threads to use: AFFECTLOG_THREADS when set to a positive integer,
// otherwise hardware concurrency. Never less than 1; AFFECTLOG_THREADS=0 or
// an unparsable value falls back to auto.
unsigned worker_count();

// Runs fn(i) for every i in [0, n) split into contiguous chunks across
// workers. Chunk assignment is deterministic, so writes to disjoint
// per-index slots are reproducible. If a call throws, the exception from the
// lowest-numbered chunk is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace affectlog
