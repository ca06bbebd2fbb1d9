#pragma once

#include <cstdint>

namespace vzeno {

/// xoshiro256++ with splitmix64 seeding. Hand-rolled so that trajectories
/// are bit-reproducible across platforms and standard library versions;
/// the determinism contract on output files depends on it.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    /// Independent stream for worker i of a batch run: mixes the index into
    /// the base seed so streams do not overlap for any practical run length.
    static Rng for_stream(std::uint64_t base_seed, std::uint64_t index) {
        std::uint64_t x = base_seed;
        std::uint64_t a = splitmix64(x);
        x = base_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        std::uint64_t b = splitmix64(x);
        return Rng(a ^ rotl(b, 17) ^ index);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in the open interval (0,1): 53-bit mantissa centered
    /// on half-steps, so 0 and 1 are never returned. Suitable as a jump
    /// threshold without further guarding.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

}  // namespace vzeno
