#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace wavefio {

// SplitMix64 generator. Output depends only on the seed, so runs are
// reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (one value per call).
    double normal() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Independent stream derived from this one and a label.
    Rng split(std::string_view label) noexcept {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (unsigned char c : label) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        return Rng(next() ^ h);
    }

private:
    std::uint64_t state_;
};

}  // namespace wavefio
