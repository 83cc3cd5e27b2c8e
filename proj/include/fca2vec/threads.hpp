#pragma once

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fca2vec {

// Worker count resolution: explicit request > FCA2VEC_THREADS > hardware.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FCA2VEC_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
            // fall through to hardware default
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run fn(begin, end) over contiguous chunks of [0, n) on `threads` workers.
// Chunk boundaries depend only on (n, threads), so callers that merge
// per-chunk results in chunk order stay deterministic. Exceptions from
// workers are rethrown on the calling thread (first chunk wins).
inline void parallel_chunks(std::size_t n, int threads,
                            const std::function<void(std::size_t, std::size_t, int)>& fn) {
    if (threads <= 1 || n <= 1) {
        if (n > 0) fn(0, n, 0);
        return;
    }
    int workers = threads;
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
    std::size_t base = n / workers, extra = n % workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t begin = 0;
    for (int w = 0; w < workers; ++w) {
        std::size_t len = base + (static_cast<std::size_t>(w) < extra ? 1 : 0);
        std::size_t end = begin + len;
        pool.emplace_back([&, begin, end, w]() {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace fca2vec
