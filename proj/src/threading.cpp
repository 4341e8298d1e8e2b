#include "rffhsi/threading.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace rffhsi {

namespace {
std::atomic<int> g_threads{0};
}

void set_worker_threads(int count) { g_threads.store(count < 0 ? 0 : count); }

int worker_threads() {
    int n = g_threads.load();
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    const int threads = static_cast<int>(std::min<std::int64_t>(worker_threads(), count));
    if (threads <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            try {
                for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    if (failed.load()) return;
                    fn(i);
                }
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rffhsi
