#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstddef>
#include <numbers>
#include <vector>

#include "wavefio/array2d.hpp"
#include "wavefio/field.hpp"
#include "wavefio/random.hpp"

namespace wavefio::testing {

inline Field2D random_field(std::size_t m, Rng& rng) {
    Array2D<double> a(m, m);
    for (auto& v : a.values()) v = rng.normal();
    return Field2D(std::move(a));
}

inline Field2D gaussian_bump(std::size_t m, Vec2 c, double width, double amp = 1.0) {
    return Field2D::from_function(m, [&](const Vec2& x) {
        const Vec2 d = x - c;
        return amp * std::exp(-dot(d, d) / (2.0 * width * width));
    });
}

// Localized plane-wave packet exp(-|x-c|^2/2w^2) cos(2 pi k <x - c, dir>).
inline Field2D wave_packet(std::size_t m, Vec2 c, double width, double k, Vec2 dir) {
    return Field2D::from_function(m, [&](const Vec2& x) {
        const Vec2 d = x - c;
        return std::exp(-dot(d, d) / (2.0 * width * width)) * std::cos(2.0 * std::numbers::pi * k * dot(d, dir));
    });
}

// Ten random Gaussian bumps clustered around the center.
inline Field2D bumps(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Field2D f(m);
    for (int b = 0; b < 10; ++b) {
        const Vec2 c{rng.uniform(0.35, 0.65), rng.uniform(0.35, 0.65)};
        f = f + gaussian_bump(m, c, rng.uniform(0.01, 0.03), rng.uniform(-1.0, 1.0));
    }
    return f;
}

// Direct O(M^4) unitary DFT, sign convention exp(-2 pi i <k, n> / M).
inline Array2D<std::complex<double>> naive_dft(const Array2D<double>& x) {
    const std::size_t m = x.rows();
    Array2D<std::complex<double>> out(m, m);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k1 = 0; k1 < m; ++k1) {
        for (std::size_t k2 = 0; k2 < m; ++k2) {
            std::complex<double> s = 0.0;
            for (std::size_t n1 = 0; n1 < m; ++n1) {
                for (std::size_t n2 = 0; n2 < m; ++n2) {
                    const double ph = -2.0 * std::numbers::pi * static_cast<double>((k1 * n1 + k2 * n2) % m) /
                                      static_cast<double>(m);
                    s += x(n1, n2) * std::polar(1.0, ph);
                }
            }
            out(k1, k2) = s * scale;
        }
    }
    return out;
}

inline double max_abs_diff(const Field2D& a, const Field2D& b) { return (a - b).max_abs(); }

}  // namespace wavefio::testing
