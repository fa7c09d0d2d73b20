#include "subthurston/util.hpp"

#include <cstdlib>

namespace subthurston {

unsigned effective_threads() {
    if (const char* env = std::getenv("SUBTHURSTON_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn,
                     unsigned threads) {
    if (threads == 0) threads = effective_threads();
    if (threads <= 1 || n_chunks <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_chunks) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<std::size_t>(threads, n_chunks);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

double pairwise_sum(const std::vector<double>& xs) {
    // Recursive halving in index order.
    struct Rec {
        const std::vector<double>& v;
        double sum(std::size_t lo, std::size_t hi) const {
            if (hi - lo == 0) return 0.0;
            if (hi - lo == 1) return v[lo];
            std::size_t mid = lo + (hi - lo) / 2;
            return sum(lo, mid) + sum(mid, hi);
        }
    } rec{xs};
    return rec.sum(0, xs.size());
}

}  // namespace subthurston
