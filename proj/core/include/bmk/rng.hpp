#pragma once

#include <cmath>
#include <cstdint>

namespace bmk {

/// splitmix64, used to key per-path generator streams.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256**; small, fast and reproducible across platforms.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

/// Standard normal sampler (Box-Muller on the xoshiro stream).  The draw
/// sequence is fully determined by the seed, independent of platform and
/// thread scheduling.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.uniform();
        const double u2 = rng_.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double uniform() { return rng_.uniform(); }

private:
    Xoshiro256 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Stream key for path i of a run seeded with `seed`; distinct paths get
/// decorrelated generators regardless of how they are scheduled onto
/// workers.
inline std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t path) {
    SplitMix64 sm{seed ^ (0xA0761D6478BD642FULL + path * 0x9E3779B97F4A7C15ULL)};
    const std::uint64_t k = sm.next();
    return k ^ (path + 0x2545F4914F6CDD1DULL);
}

} // namespace bmk
