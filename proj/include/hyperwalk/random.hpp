#pragma once

#include <cstdint>
#include <random>

namespace hyperwalk {

// splitmix64 finalizer; used to turn (seed, stream) pairs into well-spread
// engine seeds so parallel streams stay decorrelated.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream));
}

/// Deterministic RNG wrapper. mt19937_64 gives a portable bit sequence and
/// the uniform/below helpers avoid distribution classes whose output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix64(seed, stream)) {}

    std::uint64_t next() { return engine_(); }

    // uniform double in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n) via rejection
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hyperwalk
