#pragma once

#include <cstdint>
#include <random>

namespace nelab {

// splitmix64 finalizer. Bijective on 64-bit words, used for seed stretching
// and stream derivation so one master seed reproduces an entire experiment.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Hash (master, a, b) into an independent stream seed. Runs inside a sweep
// get seed derive_seed(master, point_index, run_index); no stream is reused.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (b + 0x632be59bd9b4e019ULL));
    return h;
}

// All randomness in the library flows through this wrapper. The raw engine is
// std::mt19937_64 but conversions to doubles and bounded ints are pinned here
// instead of going through std::*_distribution, whose output is not specified
// bit-for-bit across standard library versions.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1), 53 significant bits
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // uniform on {0, ..., bound-1}, unbiased via rejection
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold)
                return r % bound;
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace nelab
