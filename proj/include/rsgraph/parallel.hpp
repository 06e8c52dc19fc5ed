#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rsg {

inline unsigned effective_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (hw > 64 ? 64 : hw);
}

// Runs fn(job) for job in [0, jobs). Jobs are grabbed by atomic counter; each
// job must write only to its own output slot, so the result is identical for
// any worker count. The first exception thrown by a job is rethrown here.
template <class Fn>
void parallel_for(std::size_t jobs, unsigned workers, Fn&& fn) {
    workers = effective_workers(workers);
    if (jobs == 0) return;
    if (workers > jobs) workers = static_cast<unsigned>(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mx;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= jobs || failed.load(std::memory_order_relaxed)) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mx);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rsg
