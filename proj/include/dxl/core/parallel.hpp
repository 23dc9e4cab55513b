#pragma once
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dxl {

// Worker count from DXL_THREADS (default: hardware concurrency). Re-read on
// every call so tests can toggle the variable.
inline unsigned thread_count() {
    if (const char* env = std::getenv("DXL_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n). Work items must write only to their own output
// slots; results are then combined by the caller in index order, which keeps
// every reduction independent of the worker count. If tasks throw, the
// exception from the lowest index is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned nw = thread_count();
    if (nw <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (nw > n) nw = static_cast<unsigned>(n);
    std::vector<std::exception_ptr> errs(n);
    std::vector<std::thread> workers;
    workers.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += nw) {
                try { fn(i); } catch (...) { errs[i] = std::current_exception(); }
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace dxl
