#include "nhse/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nhse/errors.hpp"

namespace nhse {

namespace {
thread_local bool in_worker = false;
}

std::size_t worker_count() {
    const char* env = std::getenv("NHSE_WORKERS");
    if (env == nullptr || *env == '\0') return std::max(1u, std::thread::hardware_concurrency());
    const std::string text(env);
    unsigned long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
        throw ConfigError("NHSE_WORKERS must be a positive integer, got '" + text + "'", "NHSE_WORKERS");
    return value;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t workers) {
    if (n == 0) return;
    workers = std::min(workers, n);
    if (workers <= 1 || in_worker) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex mtx;
    std::size_t failed_at = n;
    std::exception_ptr failure;

    auto body = [&] {
        in_worker = true;
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mtx);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
        in_worker = false;
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    parallel_for(n, fn, worker_count());
}

} // namespace nhse
