#ifndef HDX_PARALLEL_HPP
#define HDX_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hdx {

inline int default_jobs() {
    if (const char* env = std::getenv("HDX_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0, count). Work items write into caller-owned,
// pre-sized slots so results are independent of the worker count.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (jobs <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int nt = std::min<int>(jobs, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace hdx

#endif
