#include "fsmf/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace fsmf::parallel {

namespace {

int initial_threads() {
    if (const char* env = std::getenv("FSMF_JOBS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned int hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::atomic<int> g_max_threads{0};

}  // namespace

int max_threads() {
    int n = g_max_threads.load(std::memory_order_relaxed);
    if (n == 0) {
        n = initial_threads();
        g_max_threads.store(n, std::memory_order_relaxed);
    }
    return n;
}

void set_max_threads(int n) {
    g_max_threads.store(n >= 1 ? n : 1, std::memory_order_relaxed);
}

}  // namespace fsmf::parallel
