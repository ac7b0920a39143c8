#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace geis {

/// Worker count used by parallel_for; 1 runs inline.
int jobs() noexcept;
void set_jobs(int k) noexcept;

/**
 * Runs body(i) for i in [0, count) on up to jobs() threads. Results must be
 * written to slot i by the caller, so the outcome does not depend on the
 * schedule. The first exception thrown by any body is rethrown.
 */
template <typename F>
void parallel_for(std::size_t count, F&& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace geis
