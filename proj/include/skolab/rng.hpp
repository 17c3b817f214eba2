#pragma once

#include <cstdint>
#include <cmath>

namespace skolab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream identifier: (replica, component) pairs hashed together with the
/// master seed. Identical (seed, stream) gives an identical draw sequence
/// regardless of thread schedule, so replicas can run fully parallel.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t replica = 0;
    std::uint64_t component = 0;

    std::uint64_t mix() const {
        std::uint64_t s = splitmix64(master ^ 0x243f6a8885a308d3ULL);
        s = splitmix64(s ^ (0x9e3779b97f4a7c15ULL * (replica + 1)));
        s = splitmix64(s ^ (0xd1b54a32d192ed03ULL * (component + 1)));
        return s;
    }
};

/// xoshiro256** seeded via splitmix64 expansion; counter-free per-stream state.
class RngStream {
public:
    explicit RngStream(Seed seed) {
        std::uint64_t s = seed.mix();
        for (auto& w : state_) {
            s = splitmix64(s);
            w = s;
        }
    }

    RngStream(std::uint64_t master, std::uint64_t replica, std::uint64_t component)
        : RngStream(Seed{master, replica, component}) {}

    std::uint64_t next_u64() {
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

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return u;
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    double exponential() { return -std::log(uniform_open()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace skolab
