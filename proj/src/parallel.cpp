#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "rinv/parallel.hpp"

namespace rinv {

int thread_count()
{
    if (const char* s = std::getenv("RINV_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& body)
{
    if (n == 0) return;
    chunk = std::max<std::size_t>(chunk, 1);
    std::size_t nchunks = (n + chunk - 1) / chunk;
    std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), nchunks);
    if (nthreads <= 1) {
        for (std::size_t b = 0; b < n; b += chunk) body(b, std::min(n, b + chunk));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex m;
    auto worker = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            {
                std::lock_guard<std::mutex> lk(m);
                if (first) return;
            }
            try {
                body(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (!first) first = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

} // namespace rinv
