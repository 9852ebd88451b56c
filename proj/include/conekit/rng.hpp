#pragma once

#include <cstdint>

namespace conekit {

// Deterministic 64-bit generator used everywhere randomness is needed.
// The state is the four-word xoshiro256++ state, seeded by running
// splitmix64 four times on the user seed.  Both algorithms are fixed by
// this header, so a (seed, draw sequence) pair reproduces bit-for-bit on
// any platform; nothing here depends on libc rand or std::random.
//
//   splitmix64:  z = (s += 0x9e3779b97f4a7c15)
//                z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//                z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//                return z ^ (z >> 31)
//
//   xoshiro256++: result = rotl(s0 + s3, 23) + s0, then the linear
//                 state transition with shifts 17/45 below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& w : s_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            w = x ^ (x >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform draw from [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform draw from [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer from {0, 1, ..., bound-1} by rejection, bias-free.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace conekit
