#ifndef PNSIM_RNG_HPP
#define PNSIM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace pnsim {

/// Identifies a reproducible random stream. Distinct (master_seed, stream_id)
/// pairs yield statistically independent streams.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

/// RNG algorithm identifier recorded in output metadata.
inline constexpr const char* kRngId =
    "xoshiro256** (SplitMix64-seeded) + Box-Muller";

/// SplitMix64 finalizer. Bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive combine of a running key with one field.
inline std::uint64_t seed_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Derives an independent sub-stream, keeping the master seed visible.
inline SeedSpec derive_stream(SeedSpec s, std::uint64_t tag) {
    return SeedSpec{s.master_seed, seed_combine(s.stream_id, tag)};
}

/// xoshiro256** with the full state expanded from the seed spec via
/// SplitMix64. Deterministic across platforms and thread schedules.
class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(SeedSpec seed) {
        std::uint64_t sm = seed_combine(mix64(seed.master_seed), seed.stream_id);
        for (auto& w : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            w = mix64(sm);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// One Box-Muller transform: two independent N(0,1) draws,
    /// consuming exactly two 64-bit words.
    std::pair<double, double> gaussian_pair() {
        const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0,1]
        const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;        // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace pnsim

#endif
