#pragma once

#include <array>
#include <cstddef>

#include "wavefio/array2d.hpp"
#include "wavefio/field.hpp"

namespace wavefio {

// Kernel on a rectangular block of integer offsets: tap (a, b) sits at
// offset (row0 + a, col0 + b). An empty taps array is the zero kernel.
struct Kernel2D {
    long row0 = 0;
    long col0 = 0;
    Array2D<double> taps;

    std::size_t rows() const noexcept { return taps.rows(); }
    std::size_t cols() const noexcept { return taps.cols(); }
    bool empty() const noexcept { return taps.empty(); }
    // Tap at offset (r, c); zero outside the block.
    double at(long r, long c) const noexcept;

    friend bool operator==(const Kernel2D&, const Kernel2D&) = default;
};

// Square filter with odd side K, anchored at its center: tap (a, b) is
// offset (a - K/2, b - K/2).
class Filter2D {
public:
    explicit Filter2D(Array2D<double> taps);
    static Filter2D delta(std::size_t side = 1);

    std::size_t side() const noexcept { return taps_.rows(); }
    long radius() const noexcept { return static_cast<long>(side() / 2); }
    const Array2D<double>& taps() const noexcept { return taps_; }
    Kernel2D kernel() const;

    friend bool operator==(const Filter2D&, const Filter2D&) = default;

private:
    Array2D<double> taps_;
};

// Parity classes of the 2x2 polyphase split: l0 = (0,0), l1 = (1,0),
// l2 = (0,1), l3 = (1,1), with x_l[n] = x[l + 2n].
inline constexpr std::array<std::array<long, 2>, 4> kPolyphaseOffsets{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};

// h_l[n] = h[l + 2n] for the four parity classes.
struct PolyphaseBank {
    std::array<Kernel2D, 4> components;
    std::size_t source_side = 0;
};

PolyphaseBank decompose(const Filter2D& h);
PolyphaseBank decompose(const Kernel2D& h);
// Interleaves the components back into the original filter.
Filter2D reassemble(const PolyphaseBank& bank);

// Entry (p, l) of the 4x4 polyphase filter matrix: the kernel taking input
// component x_l to output component y_p, both on the 2x coarser grid.
Kernel2D polyphase_matrix_entry(const PolyphaseBank& bank, std::size_t p, std::size_t l);

// y[n] = sum_m h[m] x[(n - m) mod N], indices taken per axis.
Array2D<double> convolve_periodic(const Array2D<double>& x, const Kernel2D& h);
Field2D convolve_periodic(const Field2D& x, const Filter2D& h);

struct PolyphaseStats {
    std::size_t innermost_channels = 0;   // 4^levels
    std::size_t max_filter_side = 0;      // largest innermost kernel extent
    std::size_t innermost_image_side = 0;
};

// Periodic convolution through `levels` nested downsample / filter-matrix /
// upsample stages. Throws InvalidArgument if the image side is not
// divisible by 2^levels, if K > N/2, or if an innermost kernel is wider
// than the innermost image.
Array2D<double> polyphase_apply(const Array2D<double>& x, const Filter2D& h, int levels,
                                PolyphaseStats* stats = nullptr);
Field2D polyphase_apply(const Field2D& x, const Filter2D& h, int levels,
                        PolyphaseStats* stats = nullptr);

struct ReluSplit {
    Array2D<double> positive;  // ReLU(+h*x)
    Array2D<double> negative;  // ReLU(-h*x)
    Array2D<double> output;    // positive - negative
};

// h*x routed through the ReLU pair. levels = 0 uses direct convolution.
ReluSplit relu_split_apply(const Array2D<double>& x, const Filter2D& h, int levels = 0);

}  // namespace wavefio
