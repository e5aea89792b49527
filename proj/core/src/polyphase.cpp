#include "wavefio/polyphase.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavefio/error.hpp"

namespace wavefio {

namespace {

long floor_div2(long v) noexcept { return v >= 0 ? v / 2 : -((-v + 1) / 2); }
long ceil_div2(long v) noexcept { return -floor_div2(-v); }
long mod2(long v) noexcept { return ((v % 2) + 2) % 2; }

Kernel2D shifted(Kernel2D k, long dr, long dc) {
    k.row0 += dr;
    k.col0 += dc;
    return k;
}

Array2D<double> apply_levels(const Array2D<double>& x, const Kernel2D& h, int levels,
                             PolyphaseStats& stats) {
    if (h.empty()) return Array2D<double>(x.rows(), x.cols(), 0.0);
    if (levels == 0) {
        if (h.rows() > x.rows() || h.cols() > x.cols()) {
            throw InvalidArgument("filter of extent " + std::to_string(h.rows()) + "x" +
                                  std::to_string(h.cols()) + " is too large for the " +
                                  std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                  " image left after level reduction");
        }
        stats.max_filter_side = std::max({stats.max_filter_side, h.rows(), h.cols()});
        stats.innermost_image_side = x.rows();
        return convolve_periodic(x, h);
    }

    const std::size_t hr = x.rows() / 2;
    const std::size_t hc = x.cols() / 2;
    std::array<Array2D<double>, 4> parts;
    for (std::size_t l = 0; l < 4; ++l) {
        const auto [dr, dc] = kPolyphaseOffsets[l];
        parts[l] = Array2D<double>(hr, hc);
        for (std::size_t i = 0; i < hr; ++i) {
            for (std::size_t j = 0; j < hc; ++j) {
                parts[l](i, j) = x(2 * i + static_cast<std::size_t>(dr), 2 * j + static_cast<std::size_t>(dc));
            }
        }
    }

    const PolyphaseBank bank = decompose(h);
    Array2D<double> y(x.rows(), x.cols(), 0.0);
    for (std::size_t p = 0; p < 4; ++p) {
        Array2D<double> yp(hr, hc, 0.0);
        for (std::size_t l = 0; l < 4; ++l) {
            const Array2D<double> contrib =
                apply_levels(parts[l], polyphase_matrix_entry(bank, p, l), levels - 1, stats);
            auto dst = yp.values();
            auto src = contrib.values();
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
        }
        const auto [dr, dc] = kPolyphaseOffsets[p];
        for (std::size_t i = 0; i < hr; ++i) {
            for (std::size_t j = 0; j < hc; ++j) {
                y(2 * i + static_cast<std::size_t>(dr), 2 * j + static_cast<std::size_t>(dc)) = yp(i, j);
            }
        }
    }
    return y;
}

}  // namespace

double Kernel2D::at(long r, long c) const noexcept {
    const long a = r - row0;
    const long b = c - col0;
    if (a < 0 || b < 0 || a >= static_cast<long>(rows()) || b >= static_cast<long>(cols())) return 0.0;
    return taps(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
}

Filter2D::Filter2D(Array2D<double> taps) : taps_(std::move(taps)) {
    if (taps_.rows() != taps_.cols() || taps_.rows() % 2 == 0) {
        throw InvalidArgument("filter must be square with an odd side");
    }
    for (double v : taps_.values()) {
        if (!std::isfinite(v)) throw InvalidArgument("filter taps must be finite");
    }
}

Filter2D Filter2D::delta(std::size_t side) {
    Array2D<double> t(side, side, 0.0);
    t(side / 2, side / 2) = 1.0;
    return Filter2D(std::move(t));
}

Kernel2D Filter2D::kernel() const { return {-radius(), -radius(), taps_}; }

PolyphaseBank decompose(const Kernel2D& h) {
    PolyphaseBank bank;
    bank.source_side = h.rows();
    const long r_lo = h.row0;
    const long r_hi = h.row0 + static_cast<long>(h.rows()) - 1;
    const long c_lo = h.col0;
    const long c_hi = h.col0 + static_cast<long>(h.cols()) - 1;
    for (std::size_t l = 0; l < 4; ++l) {
        const auto [lr, lc] = kPolyphaseOffsets[l];
        const long n_r0 = ceil_div2(r_lo - lr);
        const long n_r1 = floor_div2(r_hi - lr);
        const long n_c0 = ceil_div2(c_lo - lc);
        const long n_c1 = floor_div2(c_hi - lc);
        Kernel2D& comp = bank.components[l];
        if (h.empty() || n_r1 < n_r0 || n_c1 < n_c0) {
            comp = Kernel2D{};
            continue;
        }
        comp.row0 = n_r0;
        comp.col0 = n_c0;
        comp.taps = Array2D<double>(static_cast<std::size_t>(n_r1 - n_r0 + 1),
                                    static_cast<std::size_t>(n_c1 - n_c0 + 1));
        for (long a = n_r0; a <= n_r1; ++a) {
            for (long b = n_c0; b <= n_c1; ++b) {
                comp.taps(static_cast<std::size_t>(a - n_r0), static_cast<std::size_t>(b - n_c0)) =
                    h.at(lr + 2 * a, lc + 2 * b);
            }
        }
    }
    return bank;
}

PolyphaseBank decompose(const Filter2D& h) { return decompose(h.kernel()); }

Filter2D reassemble(const PolyphaseBank& bank) {
    const std::size_t k = bank.source_side;
    const long r = static_cast<long>(k / 2);
    Array2D<double> taps(k, k, 0.0);
    for (std::size_t l = 0; l < 4; ++l) {
        const Kernel2D& c = bank.components[l];
        const auto [lr, lc] = kPolyphaseOffsets[l];
        for (std::size_t a = 0; a < c.rows(); ++a) {
            for (std::size_t b = 0; b < c.cols(); ++b) {
                const long off_r = lr + 2 * (c.row0 + static_cast<long>(a));
                const long off_c = lc + 2 * (c.col0 + static_cast<long>(b));
                taps(static_cast<std::size_t>(off_r + r), static_cast<std::size_t>(off_c + r)) = c.taps(a, b);
            }
        }
    }
    return Filter2D(std::move(taps));
}

Kernel2D polyphase_matrix_entry(const PolyphaseBank& bank, std::size_t p, std::size_t l) {
    // y[2n + p] collects h[2j + q] x[2(n - j) + p - q]; writing p - q = l + 2e
    // fixes q = (p - l) mod 2 and e = (p - q - l) / 2, and the kernel from
    // x_l to y_p is h_q advanced by e.
    const auto [pr, pc] = kPolyphaseOffsets[p];
    const auto [lr, lc] = kPolyphaseOffsets[l];
    const long qr = mod2(pr - lr);
    const long qc = mod2(pc - lc);
    const long er = (pr - qr - lr) / 2;
    const long ec = (pc - qc - lc) / 2;
    std::size_t q = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (kPolyphaseOffsets[k][0] == qr && kPolyphaseOffsets[k][1] == qc) q = k;
    }
    const Kernel2D& comp = bank.components[q];
    if (comp.empty()) return comp;
    return shifted(comp, -er, -ec);
}

Array2D<double> convolve_periodic(const Array2D<double>& x, const Kernel2D& h) {
    const long n_r = static_cast<long>(x.rows());
    const long n_c = static_cast<long>(x.cols());
    Array2D<double> y(x.rows(), x.cols(), 0.0);
    if (h.empty()) return y;
    for (std::size_t a = 0; a < h.rows(); ++a) {
        for (std::size_t b = 0; b < h.cols(); ++b) {
            const double w = h.taps(a, b);
            if (w == 0.0) continue;
            const long mr = h.row0 + static_cast<long>(a);
            const long mc = h.col0 + static_cast<long>(b);
            for (long i = 0; i < n_r; ++i) {
                const long si = (((i - mr) % n_r) + n_r) % n_r;
                for (long j = 0; j < n_c; ++j) {
                    const long sj = (((j - mc) % n_c) + n_c) % n_c;
                    y(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +=
                        w * x(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
                }
            }
        }
    }
    return y;
}

Field2D convolve_periodic(const Field2D& x, const Filter2D& h) {
    return Field2D(convolve_periodic(x.array(), h.kernel()));
}

Array2D<double> polyphase_apply(const Array2D<double>& x, const Filter2D& h, int levels,
                                PolyphaseStats* stats) {
    if (levels < 1) throw InvalidArgument("polyphase_apply needs levels >= 1");
    const std::size_t div = std::size_t{1} << levels;
    if (x.rows() % div != 0 || x.cols() % div != 0) {
        throw InvalidArgument("image sides must be divisible by 2^levels = " + std::to_string(div));
    }
    if (h.side() > x.rows() / 2 || h.side() > x.cols() / 2) {
        throw InvalidArgument("filter side " + std::to_string(h.side()) + " exceeds half the image side");
    }
    PolyphaseStats local;
    Array2D<double> y = apply_levels(x, h.kernel(), levels, local);
    local.innermost_channels = std::size_t{1} << (2 * levels);
    if (stats) *stats = local;
    return y;
}

Field2D polyphase_apply(const Field2D& x, const Filter2D& h, int levels, PolyphaseStats* stats) {
    return Field2D(polyphase_apply(x.array(), h, levels, stats));
}

ReluSplit relu_split_apply(const Array2D<double>& x, const Filter2D& h, int levels) {
    const Array2D<double> y = levels == 0 ? convolve_periodic(x, h.kernel()) : polyphase_apply(x, h, levels);
    ReluSplit out{Array2D<double>(y.rows(), y.cols()), Array2D<double>(y.rows(), y.cols()),
                  Array2D<double>(y.rows(), y.cols())};
    auto src = y.values();
    auto pos = out.positive.values();
    auto neg = out.negative.values();
    auto res = out.output.values();
    for (std::size_t k = 0; k < src.size(); ++k) {
        pos[k] = std::max(src[k], 0.0);
        neg[k] = std::max(-src[k], 0.0);
        res[k] = pos[k] - neg[k];
    }
    return out;
}

}  // namespace wavefio
