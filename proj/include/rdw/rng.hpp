#pragma once

// Deterministic random sampling. mt19937_64 supplies the bits; the
// distributions are explicit so streams are reproducible across platforms
// and library versions.

#include <cstdint>
#include <random>

#include "rdw/geom.hpp"

namespace rdw {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return (gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    double angle() { return uniform(0.0, kTwoPi); }

    Point2 point_in_box(Point2 lo, Point2 hi) {
        return {uniform(lo.x, hi.x), uniform(lo.y, hi.y)};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace rdw
