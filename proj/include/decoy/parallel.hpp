#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace decoy {

inline unsigned default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Run body(i) for i in [0, count) on up to `workers` threads.
 *
 * Indices are statically striped across workers; callers write results into
 * per-index slots so the merged output never depends on scheduling. The first
 * exception thrown by any body is rethrown on the calling thread.
 */
template<class F>
void parallel_for(std::size_t count, unsigned workers, F&& body)
{
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            try
            {
                for (std::size_t i = w; i < count; i += workers)
                    body(i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace decoy
