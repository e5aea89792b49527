#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include "wavefio/array2d.hpp"
#include "wavefio/vec2.hpp"

namespace wavefio {

// Real M x M samples on the unit square; sample (i, j) sits at the pixel
// center (i/M, j/M). M is a power of two, at least 8, and all values are
// finite. Immutable once built.
class Field2D {
public:
    // Zero field.
    explicit Field2D(std::size_t m);
    // Takes ownership of the samples; throws InvalidArgument on a bad side
    // length, a non-square array or non-finite entries.
    explicit Field2D(Array2D<double> samples);

    static Field2D from_function(std::size_t m, const std::function<double(const Vec2&)>& f);

    std::size_t side() const noexcept { return data_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_(i, j); }
    std::span<const double> values() const noexcept { return data_.values(); }
    const Array2D<double>& array() const noexcept { return data_; }

    // Point of sample (i, j) in domain units.
    Vec2 point(std::size_t i, std::size_t j) const noexcept;

    double norm2() const noexcept;
    double norm1() const noexcept;
    double max_abs() const noexcept;

    friend bool operator==(const Field2D&, const Field2D&) = default;

private:
    Array2D<double> data_;
};

bool is_valid_side(std::size_t m) noexcept;

Field2D operator+(const Field2D& a, const Field2D& b);
Field2D operator-(const Field2D& a, const Field2D& b);
Field2D operator*(double s, const Field2D& a);
double dot(const Field2D& a, const Field2D& b);

// ||a - b||_2 / ||b||_2; returns ||a||_2 when b is identically zero.
double relative_l2(const Field2D& a, const Field2D& b);

// Circular shift by (di, dj) samples: out(i, j) = f(i - di, j - dj).
Field2D circular_shift(const Field2D& f, long di, long dj);

// Canonical pixel grid G with points (i/M, j/M).
using PixelGrid = Array2D<Vec2>;
PixelGrid canonical_grid(std::size_t m);

}  // namespace wavefio
