#pragma once

#include <cstddef>
#include <functional>

namespace hyperwalk {

// HYPERWALK_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, count) on up to `workers` threads (0: worker_count()).
// Indices are handed out in order; the first exception is rethrown after all
// workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

} // namespace hyperwalk
