#include "wkg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace wkg {

namespace {
std::atomic<int> g_threads{0};
}

int thread_count() {
    int t = g_threads.load();
    if (t > 0) return t;
    unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hc, 1u, 8u));
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t total = end > begin ? end - begin : 0;
    const int t = thread_count();
    if (total == 0) return;
    if (t <= 1 || total < 512) {
        fn(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::size_t chunk = (total + t - 1) / t;
    for (int i = 0; i < t; ++i) {
        std::size_t lo = begin + chunk * i;
        if (lo >= end) break;
        std::size_t hi = std::min(end, lo + chunk);
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace wkg
