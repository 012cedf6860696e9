#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace restrictml {

// Deterministic random source.  std::mt19937_64 output is fully specified
// by the standard, but the <random> distributions are not, so every draw
// here goes through hand-rolled, platform-stable reductions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    // Derived stream: same seed + different stream ids give independent,
    // reproducible sequences (per-tree forests, per-epoch shuffles).
    Rng(std::uint64_t seed, std::uint64_t stream)
        : engine_(mix(mix(seed) ^ (stream + 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t next() { return engine_(); }

    // Unbiased integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    // splitmix64 finalizer; spreads low-entropy seeds across the state.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace restrictml
