// parallel.cpp — Thread-chunked index loop

#include "blockade/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace blockade {

std::size_t max_worker_threads()
{
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("BLOCKADE_LADDER_THREADS")) {
            const long v = std::atol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<std::size_t>(hw > 0 ? hw : 1);
    }();
    return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min(max_worker_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    const std::size_t chunk = std::max<std::size_t>(1, n / (8 * workers));

    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n || failed.load()) return;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

} // namespace blockade
