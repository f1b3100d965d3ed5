#pragma once

// Seeded random streams for reproducible ensemble construction and trial
// scheduling. All draws go through one generator type so a fixed seed yields
// the same ensembles on every platform with the same libm.

#include <cstdint>
#include <cmath>
#include <random>

namespace nefmul {

// Derives an independent stream seed from a parent seed and a tag
// (splitmix64 finalizer). Used to give every ensemble, trial and membrane
// initialization its own stream without coordination.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Box-Muller. Consumes exactly two draws per call so the stream position
    // is input-independent.
    double normal() {
        double u1 = u01();
        const double u2 = u01();
        if (u1 == 0.0) {
            u1 = 0x1.0p-53;
        }
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(u01() * static_cast<double>(n)) %
               n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace nefmul
