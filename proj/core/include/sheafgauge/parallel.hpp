#pragma once

#include <cstddef>
#include <functional>

namespace sheafgauge {

/** Worker count: SHEAFGAUGE_THREADS when set to a positive integer, else hardware concurrency. */
std::size_t worker_count();

/**
 * Runs body(i) for i in [0, count) on up to worker_count() threads. Each index
 * is handled exactly once; the first exception is rethrown after all workers join.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace sheafgauge
