#include "fracbayes/parallel.hpp"

#include <atomic>

namespace fracbayes {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) noexcept { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() noexcept {
    const int cap = g_max_threads.load();
    if (cap > 0) return cap;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace fracbayes
