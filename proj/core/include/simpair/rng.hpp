#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace simpair {

// Seeded RNG used by the synthetic generators. The engine is mt19937_64 and
// the uniform/normal derivations below are spelled out explicitly (instead of
// using std::*_distribution) so that a given seed produces the same stream on
// every standard library. Child streams are derived with splitmix64, which
// decorrelates small consecutive seeds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    // Independent stream keyed by (seed, id).
    Rng stream(std::uint64_t id) const {
        return Rng(splitmix64(seed_ ^ (0x9e3779b97f4a7c15ull + id)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // keep log(u1) finite
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    static const char* algorithm() { return "mt19937_64+splitmix64"; }

    static std::uint64_t splitmix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace simpair
