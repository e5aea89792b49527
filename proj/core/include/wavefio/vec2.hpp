#pragma once

#include <cmath>

namespace wavefio {

// A point or direction in the plane. x1 pairs with the row index of a field,
// x2 with the column index.
struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x1 += o.x1; x2 += o.x2; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x1 -= o.x1; x2 -= o.x2; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x1 *= s; x2 *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x1, -a.x2}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(const Vec2& a) noexcept { return std::hypot(a.x1, a.x2); }
inline Vec2 direction(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }

}  // namespace wavefio
