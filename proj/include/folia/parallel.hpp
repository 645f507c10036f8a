#pragma once

#include <cstddef>
#include <functional>

namespace folia {

/// Worker cap: FOLIA_THREADS if set, otherwise hardware concurrency (at least 1).
int worker_count();

/// Runs fn(0..n-1), sliced across workers. fn must only write to caller-owned, index-disjoint
/// slots; result assembly is then deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace folia
