#pragma once

#include <cstddef>
#include <functional>

namespace cstar {

/// Worker count: hardware concurrency, capped by CSTAR_FRAMES_THREADS when set.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is visited exactly once; callers write results into slot i so the
/// aggregate does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cstar
