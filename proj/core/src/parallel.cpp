#include "zeno/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace zeno {

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned limit) { g_thread_limit.store(limit); }

unsigned thread_limit() {
    const unsigned limit = g_thread_limit.load();
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return limit == 0 ? hw : limit;
}

unsigned apply_thread_limit_from_env() {
    if (const char* env = std::getenv("ZENO_LAB_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) set_thread_limit(static_cast<unsigned>(value));
        } catch (const std::exception&) {
            // ignored: malformed values leave the default in place
        }
    }
    return thread_limit();
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(thread_limit(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace zeno
