// Bounded worker pool over independent shards; results land in an
// index-ordered vector, so the merged output is identical for any worker
// count.

#ifndef FLAB_PARALLEL_HPP
#define FLAB_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace flab {

template <typename R>
std::vector<R> parallel_map(std::size_t count, std::size_t workers,
                            const std::function<R(std::size_t)>& fn) {
    std::vector<R> results(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    results[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace flab

#endif
