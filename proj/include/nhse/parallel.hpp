#pragma once

#include <cstddef>
#include <functional>

namespace nhse {

/// Worker count from NHSE_WORKERS, else hardware concurrency.
/// Throws ConfigError when the variable is set but not a positive integer.
std::size_t worker_count();

/// Runs fn(0..n-1) on up to `workers` threads. Calls made from inside a
/// worker run serially. If several indices throw, the lowest index wins.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t workers);
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace nhse
