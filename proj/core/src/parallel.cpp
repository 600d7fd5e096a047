#include "chemoctrl/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace chemoctrl {

namespace {

int read_env_workers() {
    const char* s = std::getenv("CHEMOCTRL_THREADS");
    if (!s) return 1;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || v < 1) return 1;
    return static_cast<int>(std::min<long>(v, 256));
}

int g_workers = -1;

}  // namespace

int worker_count() {
    if (g_workers < 0) g_workers = read_env_workers();
    return g_workers;
}

void set_worker_count(int n) { g_workers = std::max(1, n); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    const int workers = worker_count();
    // Small ranges are not worth the thread spawn.
    if (workers == 1 || n < 4096) {
        fn(0, n);
        return;
    }
    const int used = static_cast<int>(std::min<std::int64_t>(workers, n));
    const std::int64_t chunk = (n + used - 1) / used;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used - 1));
    for (int w = 1; w < used; ++w) {
        const std::int64_t b = w * chunk;
        const std::int64_t e = std::min<std::int64_t>(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    fn(0, std::min<std::int64_t>(n, chunk));
    for (auto& t : pool) t.join();
}

}  // namespace chemoctrl
