#pragma once

#include <cstddef>
#include <functional>

namespace congen {

// Runs body(0..count-1) on `jobs` worker threads (0 = hardware
// concurrency). Each index is claimed exactly once; callers keep results
// deterministic by writing to per-index slots. The first exception thrown
// by a body is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace congen
