#include "cf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cf {

int thread_count() {
    if (const char* s = std::getenv("COMBING_FORGE_THREADS")) {
        int n = std::atoi(s);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int, int)>& fn) {
    int T = std::min(thread_count(), std::max(1, n / 256));
    if (T <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    for (int k = 0; k < T; ++k) {
        int b = static_cast<int>(static_cast<long long>(n) * k / T), e = static_cast<int>(static_cast<long long>(n) * (k + 1) / T);
        pool.emplace_back([&, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace cf
