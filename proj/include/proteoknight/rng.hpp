#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace proteoknight {

// Seeded generator whose derived values (uniform doubles, bounded integers)
// are computed here instead of through <random> distributions, so that the
// sequence of draws is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    bool bernoulli(double p_true) { return uniform() < p_true; }

private:
    std::mt19937_64 engine_;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Independent stream seed for a (seed, key, salt) triple.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view key,
                                    std::uint64_t salt = 0) {
    return splitmix64(splitmix64(seed ^ fnv1a64(key)) ^ splitmix64(salt + 0x51ed270b27a3f1c5ULL));
}

}  // namespace proteoknight
