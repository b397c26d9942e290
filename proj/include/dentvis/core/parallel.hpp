#pragma once

#include <cstddef>
#include <functional>

namespace dentvis {

/// Worker count: DENTVIS_THREADS if set, else the value passed to
/// set_thread_count, else hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) over fixed contiguous chunks. Each index is
/// visited exactly once; callers write results into per-index slots, so the
/// outcome does not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dentvis
