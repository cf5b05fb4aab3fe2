#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace glyphlab {

/// Seeded generator with portable draw helpers.
///
/// The standard distributions are implementation-defined, so every draw that
/// feeds a reproducible result goes through the helpers below. Two runs with
/// the same seed produce the same sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for item `index` of a batch seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seed for a keyed item (record id); independent of batch position.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

} // namespace glyphlab
