#pragma once

#include <cstddef>
#include <functional>

namespace mouldkit {

/// Number of worker threads: hardware concurrency capped by the
/// MOULDKIT_THREADS environment variable when set.
std::size_t worker_count();

/// Runs fn(i) for i in [begin, end) on worker_count() threads.
/// The index range is split into contiguous blocks, so results are
/// deterministic whenever iterations write to disjoint state.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn);

/// Block variant: fn(block_begin, block_end) per contiguous chunk.
void parallel_for_blocked(std::size_t begin, std::size_t end,
                          const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace mouldkit
