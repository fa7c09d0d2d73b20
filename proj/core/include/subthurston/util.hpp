#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace subthurston {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error taxonomy shared by the library and the CLI exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssumptionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Splitmix-style generator. Fixed algorithm so that seeded runs are
// reproducible across standard libraries (std::uniform_* is not portable).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is fine here; n is tiny relative to 2^64.
        return next() % n;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on up to
// `threads` workers. Chunk outputs must be written to preallocated,
// per-chunk slots so results do not depend on the thread count or
// scheduling; callers combine the slots afterwards in index order.
void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn,
                     unsigned threads = 0);

// Effective worker count: SUBTHURSTON_THREADS if set, else hardware.
unsigned effective_threads();

// Pairwise (tree) summation in index order; deterministic regardless of
// how the addends were produced.
double pairwise_sum(const std::vector<double>& xs);

}  // namespace subthurston
