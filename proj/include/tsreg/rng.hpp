#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "tsreg/errors.hpp"
#include "tsreg/special_functions.hpp"

namespace tsreg {

/// splitmix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives the seed of an independent sub-stream for (base_seed, index).
///
/// Used to give every Monte Carlo replicate (and every bootstrap pass
/// within a replicate) its own stream, so results do not depend on how
/// replicates are scheduled across threads.
inline std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(mix64(base_seed + 0x9e3779b97f4a7c15ull) +
                 index * 0xd1b54a32d192ed03ull + 0x8cb92ba72f3d8dd7ull);
}

/// Seedable random generator with fully specified output.
///
/// Wraps std::mt19937_64 (bit-exact per the standard) and draws normals
/// and Student-t variates by inversion, so every sample path is a pure
/// function of the seed, independent of platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw strictly inside (0, 1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw by inverse-CDF.
    double normal() { return normal_quantile(uniform()); }

    /// Student-t draw: normal over the scaled root of a chi-square
    /// (sum of dof squared normals).
    double student_t(int dof) {
        if (dof < 1) throw InvalidArgumentError("student_t: dof must be >= 1");
        const double z = normal();
        double chi2 = 0.0;
        for (int i = 0; i < dof; ++i) {
            const double w = normal();
            chi2 += w * w;
        }
        return z / std::sqrt(chi2 / dof);
    }

    /// Unbiased uniform integer in [0, bound).
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw InvalidArgumentError("uniform_below: bound must be > 0");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t v = engine_();
            if (v >= threshold) return v % bound;
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tsreg
