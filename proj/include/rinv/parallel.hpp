#pragma once

#include <cstddef>
#include <functional>

namespace rinv {

// RINV_THREADS when set to a positive integer, hardware concurrency otherwise.
int thread_count();

// Calls body(begin, end) on disjoint chunks covering [0, n). The first exception
// thrown by any chunk is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace rinv
