// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace tailrca {

/// One splitmix64 step. Advances the state and returns the next value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, salt). Used for per-metric
/// noise substreams and per-trial scenario randomization so that any single
/// stream is reproducible in isolation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (salt * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

/// Deterministic PRNG. splitmix64 core, explicit bit-to-double conversion and
/// a polar-method normal generator, so sequences depend only on the seed and
/// never on the standard library's distribution implementations.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % range);
    }

    /// Standard normal via the Marsaglia polar method (spare value cached).
    double normal() {
        if (spare_) {
            const double z = *spare_;
            spare_.reset();
            return z;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        return u * m;
    }

    /// Standard normal conditioned on |z| <= bound_sigma (rejection).
    double truncated_normal(double bound_sigma) {
        double z;
        do {
            z = normal();
        } while (std::abs(z) > bound_sigma);
        return z;
    }

   private:
    std::uint64_t state_;
    std::optional<double> spare_;
};

}  // namespace tailrca
