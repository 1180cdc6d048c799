#ifndef FRACBAYES_PARALLEL_HPP_
#define FRACBAYES_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fracbayes {

// Global worker cap (0 = hardware concurrency).  Changing it never changes
// results, only wall time: every parallel_for body writes to slots indexed
// by iteration number and reductions happen serially afterwards.
void set_max_threads(int n) noexcept;
int max_threads() noexcept;

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

// Static block partition of [0, n) over worker threads.  Nested calls run
// serially so studies that parallelize over replicates do not oversubscribe.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        detail::inside_parallel_region ? 1 : static_cast<std::size_t>(max_threads());
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t n_threads = workers < n ? workers : n;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    std::exception_ptr first_error;
    std::mutex* mtx = nullptr;  // single writer per slot; only errors need sync
    static std::mutex error_mutex;
    mtx = &error_mutex;
    for (std::size_t w = 0; w < n_threads; ++w) {
        const std::size_t lo = n * w / n_threads;
        const std::size_t hi = n * (w + 1) / n_threads;
        pool.emplace_back([&, lo, hi]() {
            detail::inside_parallel_region = true;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(*mtx);
                if (!first_error) first_error = std::current_exception();
            }
            detail::inside_parallel_region = false;
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fracbayes

#endif  // FRACBAYES_PARALLEL_HPP_
