#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace raag {

using BigInt = boost::multiprecision::cpp_int;

// SplitMix64. All randomness in the toolkit flows from one user seed through
// per-index derived streams, so parallel and serial runs draw identical bits.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Stream for the index-th independent draw under the same master seed.
    static SplitMix64 stream(uint64_t seed, uint64_t index) {
        SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        return SplitMix64(mixer.next());
    }

    // Uniform in [0, bound) by rejection on the top bits.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t mask = ~0ull >> __builtin_clzll(bound - 1 | 1);
        uint64_t v;
        do {
            v = next() & mask;
        } while (v >= bound);
        return v;
    }

    // Uniform big integer in [0, bound), bound > 0.
    BigInt big_below(const BigInt& bound) {
        if (bound <= 1) return 0;
        unsigned bits = (unsigned)boost::multiprecision::msb(bound - 1) + 1;
        while (true) {
            BigInt v = 0;
            unsigned got = 0;
            while (got < bits) {
                v <<= 64;
                v |= next();
                got += 64;
            }
            v >>= (got - bits);
            if (v < bound) return v;
        }
    }
};

}  // namespace raag
