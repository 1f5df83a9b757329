#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace tmsnn {

/// Seeded random source with platform-independent distributions.
///
/// std::mt19937_64 output is pinned by the standard, but the standard
/// distributions are not; the samplers here are implemented explicitly so a
/// given seed produces the same stream on every toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per pair, one cached).
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, bound), bound >= 1. Rejection sampling, unbiased.
    std::uint64_t uniform_int(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t draw = next_u64();
        while (draw > limit) draw = next_u64();
        return draw % bound;
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values)
    {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const char c : text) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

} // namespace detail

/// Derive a stage sub-seed from a master seed.
///
/// The derivation is a documented, stable hash: FNV-1a over the stage name,
/// mixed with the base seed and any extra indices through splitmix64.
/// Identical inputs give identical sub-seeds on every platform.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stage)
{
    return detail::splitmix64(base ^ detail::fnv1a(stage));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stage, std::uint64_t index)
{
    return detail::splitmix64(derive_seed(base, stage) ^ detail::splitmix64(index));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stage, std::uint64_t a, std::uint64_t b)
{
    return detail::splitmix64(derive_seed(base, stage, a) ^ detail::splitmix64(b + 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stage, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c)
{
    return detail::splitmix64(derive_seed(base, stage, a, b) ^ detail::splitmix64(c + 2));
}

} // namespace tmsnn
