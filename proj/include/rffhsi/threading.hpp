#ifndef RFFHSI_THREADING_HPP
#define RFFHSI_THREADING_HPP

#include <cstdint>
#include <functional>

namespace rffhsi {

// Process-wide worker budget, set by the CLI --threads flag. 0 means use
// hardware concurrency.
void set_worker_threads(int count);
int worker_threads();

// Runs fn(0..count-1), partitioned across at most worker_threads() threads.
// Each index is handled exactly once, so slot-writing bodies are
// deterministic under any schedule.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace rffhsi

#endif
