#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace plstm {

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleError : Error { using Error::Error; };
struct PathExplosionError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct StrategyMismatchError : Error { using Error::Error; };
struct DecompositionMismatchError : Error { using Error::Error; };
struct LengthError : Error { using Error::Error; };
struct SizeError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct DegenerateColumnError : Error { using Error::Error; };
struct RejectionLimitError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct DatasetError : Error { using Error::Error; };
struct NonFiniteLossError : Error { using Error::Error; };
struct UnknownSuiteError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// splitmix64-based generator. Unlike <random> distributions, every draw is
// fully specified here, so seeded outputs are identical across platforms and
// standard-library versions. Streams can be forked per work item (e.g. one
// stream per dataset index), which makes parallel generation order-free.
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent child stream; hash-mixes (seed, index).
    Rng fork(std::uint64_t index) const {
        std::uint64_t s = state_ + 0x2545f4914f6cdd1dULL * (index + 1);
        Rng child(s);
        child.next_u64();
        return child;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller (deterministic two-draw form).
    double next_gaussian() {
        double u1 = 0.0;
        do { u1 = next_double(); } while (u1 <= 1e-300);
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Parallel helpers
// ---------------------------------------------------------------------------

// Worker cap: PLSTM_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("PLSTM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs fn(i) for i in [0, n). Results must be written to disjoint slots so the
// outcome is identical for any worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace plstm
