#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "wavefio/error.hpp"
#include "wavefio/polyphase.hpp"

using namespace wavefio;
using wavefio::testing::reference_convolution;

namespace {

Filter2D random_filter(std::size_t k, Rng& rng) {
    Array2D<double> t(k, k);
    for (auto& v : t.values()) v = rng.normal();
    return Filter2D(std::move(t));
}

Array2D<double> random_image(std::size_t n, Rng& rng) {
    Array2D<double> x(n, n);
    for (auto& v : x.values()) v = rng.normal();
    return x;
}

double max_diff(const Array2D<double>& a, const Array2D<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

}  // namespace

TEST(Polyphase, FilterValidation) {
    EXPECT_THROW(Filter2D(Array2D<double>(4, 4, 1.0)), InvalidArgument);
    EXPECT_THROW(Filter2D(Array2D<double>(3, 5, 1.0)), InvalidArgument);
    EXPECT_NO_THROW(Filter2D(Array2D<double>(5, 5, 1.0)));
}

TEST(Polyphase, DirectConvolutionMatchesReference) {
    Rng rng(1);
    const Filter2D h = random_filter(5, rng);
    const Array2D<double> x = random_image(16, rng);
    EXPECT_LT(max_diff(convolve_periodic(x, h.kernel()), reference_convolution(x, h)), 1e-12);
}

TEST(Polyphase, DeltaFilterIsIdentity) {
    Rng rng(2);
    const Array2D<double> x = random_image(32, rng);
    EXPECT_EQ(polyphase_apply(x, Filter2D::delta(1), 2), x);
}

TEST(Polyphase, ComponentsInterleaveBack) {
    Rng rng(3);
    for (std::size_t k : {1u, 3u, 5u, 9u}) {
        const Filter2D h = random_filter(k, rng);
        const PolyphaseBank bank = decompose(h);
        EXPECT_EQ(reassemble(bank), h);
        std::size_t taps = 0;
        for (const auto& c : bank.components) {
            for (double v : c.taps.values()) taps += v != 0.0 ? 1 : 0;
        }
        EXPECT_EQ(taps, k * k);
    }
}

TEST(Polyphase, ComponentDefinition) {
    Rng rng(4);
    const Filter2D h = random_filter(7, rng);
    const Kernel2D full = h.kernel();
    const PolyphaseBank bank = decompose(h);
    for (std::size_t l = 0; l < 4; ++l) {
        const auto [l1, l2] = kPolyphaseOffsets[l];
        for (long n1 = -3; n1 <= 3; ++n1) {
            for (long n2 = -3; n2 <= 3; ++n2) {
                EXPECT_EQ(bank.components[l].at(n1, n2), full.at(l1 + 2 * n1, l2 + 2 * n2));
            }
        }
    }
}

// y_p = sum_l E_{p,l} * x_l on the coarse grid reproduces the polyphase
// components of y = h * x.
TEST(Polyphase, MatrixEntriesReproduceOutputComponents) {
    Rng rng(5);
    const Filter2D h = random_filter(5, rng);
    const Array2D<double> x = random_image(16, rng);
    const Array2D<double> y = reference_convolution(x, h);
    const PolyphaseBank bank = decompose(h);
    auto component = [](const Array2D<double>& a, std::size_t l) {
        const auto [l1, l2] = kPolyphaseOffsets[l];
        Array2D<double> c(a.rows() / 2, a.cols() / 2);
        for (std::size_t i = 0; i < c.rows(); ++i) {
            for (std::size_t j = 0; j < c.cols(); ++j) {
                c(i, j) = a(static_cast<std::size_t>(l1) + 2 * i, static_cast<std::size_t>(l2) + 2 * j);
            }
        }
        return c;
    };
    for (std::size_t p = 0; p < 4; ++p) {
        Array2D<double> yp(8, 8, 0.0);
        for (std::size_t l = 0; l < 4; ++l) {
            const Array2D<double> part = convolve_periodic(component(x, l), polyphase_matrix_entry(bank, p, l));
            for (std::size_t k = 0; k < yp.size(); ++k) yp.values()[k] += part.values()[k];
        }
        EXPECT_LT(max_diff(yp, component(y, p)), 1e-12);
    }
}

TEST(Polyphase, NetworkEqualsDirectConvolution) {
    for (std::size_t k : {3u, 5u, 9u, 15u}) {
        for (int levels : {1, 2, 3}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                Rng rng(1000 * k + 10 * static_cast<std::uint64_t>(levels) + seed);
                const Filter2D h = random_filter(k, rng);
                const Array2D<double> x = random_image(64, rng);
                PolyphaseStats stats;
                const auto y = polyphase_apply(x, h, levels, &stats);
                EXPECT_LT(max_diff(y, reference_convolution(x, h)), 1e-10) << "K=" << k << " L=" << levels;
                EXPECT_EQ(stats.innermost_channels, std::size_t{1} << (2 * levels));
                EXPECT_EQ(stats.innermost_image_side, 64u >> levels);
            }
        }
    }
}

TEST(Polyphase, FilterSizeHalvesPerLevel) {
    Rng rng(6);
    const Filter2D h = random_filter(15, rng);
    const Array2D<double> x = random_image(64, rng);
    std::size_t prev = 15;
    for (int levels = 1; levels <= 3; ++levels) {
        PolyphaseStats stats;
        polyphase_apply(x, h, levels, &stats);
        EXPECT_LE(stats.max_filter_side, prev / 2 + 2);
        prev = stats.max_filter_side;
    }
}

TEST(Polyphase, PreconditionsAreChecked) {
    Rng rng(7);
    const Array2D<double> x = random_image(24, rng);
    EXPECT_THROW(polyphase_apply(x, random_filter(3, rng), 4), InvalidArgument);
    EXPECT_THROW(polyphase_apply(random_image(16, rng), random_filter(11, rng), 1), InvalidArgument);
    EXPECT_THROW(polyphase_apply(random_image(16, rng), random_filter(3, rng), 0), InvalidArgument);
}

TEST(Polyphase, ReluPairReconstructs) {
    Rng rng(8);
    const Filter2D h = random_filter(5, rng);
    const Array2D<double> x = random_image(32, rng);
    const ReluSplit s = relu_split_apply(x, h, 2);
    const Array2D<double> ref = reference_convolution(x, h);
    EXPECT_LT(max_diff(s.output, ref), 1e-10);
    for (std::size_t k = 0; k < ref.size(); ++k) {
        EXPECT_GE(s.positive.values()[k], 0.0);
        EXPECT_GE(s.negative.values()[k], 0.0);
        EXPECT_EQ(s.positive.values()[k] * s.negative.values()[k], 0.0);
    }
}
