#pragma once

#include <cstddef>
#include <functional>

namespace gsc {

/// Worker threads used by the evaluation kernels (default: hardware concurrency).
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs fn(k) for k in [0, n_tasks). Tasks are claimed dynamically, so fn must
/// write to task-private storage; callers reduce in task order afterwards.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& fn);

}  // namespace gsc
