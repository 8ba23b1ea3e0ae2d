#ifndef SEIQR_PARALLEL_HPP
#define SEIQR_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace seiqr
{

/// Worker cap: SEIQR_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.  Only task-level parallelism is affected; every
/// task writes disjoint outputs and reduces sequentially, so results do not
/// depend on the budget.
inline int thread_budget()
{
    static const int cached = [] {
        if (const char* env = std::getenv("SEIQR_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }();
    return cached;
}

/// Runs fn(0), ..., fn(n - 1) on up to thread_budget() workers.  Tasks must
/// be independent.  The first exception thrown by any task is rethrown on
/// the calling thread after all tasks finish.
template <class Fn>
void parallel_for_n(int n, Fn&& fn)
{
    const int workers = std::min(n, thread_budget());
    if (workers <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= n) return;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace seiqr

#endif
