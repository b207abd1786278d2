#pragma once

#include <cstdint>
#include <random>

namespace hypmnnr {

/// splitmix64 finalizer; used to turn (seed, index) pairs into well-mixed
/// substream seeds so that parallel replicates are statistically independent
/// and reproducible regardless of scheduling.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 1));
}

/// Deterministic per-caller random source. Not shareable between threads;
/// derive one per worker with derive_seed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(mix64(seed)), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& engine() { return engine_; }

    /// Uniform on [0,1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace hypmnnr
