#ifndef LAWV_PARALLEL_HPP
#define LAWV_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace lawv {

/// Runs fn(i) for i in [0, count) on at most `jobs` threads. fn must
/// write any results into per-index slots so output never depends on
/// completion order. The pending exception with the lowest index is
/// rethrown once all workers finish.
template <typename Fn>
void parallel_for(int jobs, int count, Fn && fn)
{
    if (count <= 0)
        return;
    if (jobs <= 1 || count == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    int workers = std::min(jobs, count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    fn(i);
                }
                catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto & t : pool)
        t.join();
    for (auto & e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace lawv

#endif
