#pragma once

#include <cmath>
#include <cstdint>

namespace nclmat {

// splitmix64 finalizer; seed expansion and substream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Experiment seed. Substreams are derived by mixing a purpose tag and an
// index (typically the trial number) into the base value, so every stream
// is independent of execution order and thread count.
struct Seed {
    std::uint64_t value = 0;

    constexpr Seed stream(std::uint64_t tag, std::uint64_t index = 0) const {
        return Seed{mix64(mix64(value ^ mix64(tag)) ^ mix64(index ^ 0x9f0e1d2c3b4a5968ull))};
    }

    friend constexpr bool operator==(const Seed&, const Seed&) = default;
};

// xoshiro256++ seeded through splitmix64. Variate transforms are done here
// rather than through <random> distributions, whose draw sequences are
// implementation-defined.
class Rng {
public:
    explicit Rng(Seed seed) {
        std::uint64_t s = seed.value;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
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

    // Uniform on [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double next_open_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the second member of each pair is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(next_open_unit()));
        const double angle = 2.0 * kPi * next_unit();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr double kPi = 3.14159265358979323846;

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace nclmat
