#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wavefio/config.hpp"
#include "wavefio/error.hpp"
#include "wavefio/fft.hpp"
#include "wavefio/tiling.hpp"

using namespace wavefio;
using wavefio::testing::random_field;

namespace {

TilingConfig make(std::size_t m, int kmin, int kmax, std::vector<int> wedges, double beta = 0.5) {
    TilingConfig c;
    c.side = m;
    c.k_min = kmin;
    c.k_max = kmax;
    c.wedges = std::move(wedges);
    c.beta = beta;
    return c;
}

}  // namespace

TEST(SmoothStep, ComplementIdentityAndEnds) {
    for (double x = -1.5; x <= 1.5; x += 0.01) {
        EXPECT_NEAR(smooth_step(x) + smooth_step(-x), 1.0, 1e-14);
        EXPECT_GE(smooth_step(x), 0.0);
        EXPECT_LE(smooth_step(x), 1.0);
    }
    EXPECT_EQ(smooth_step(-1.0), 0.0);
    EXPECT_EQ(smooth_step(1.0), 1.0);
    EXPECT_NEAR(smooth_step(0.0), 0.5, 1e-15);
}

TEST(Tiling, Validation) {
    EXPECT_THROW(build_tiling(make(128, 2, 6, {8, 16, 16, 32, 32})), InvalidArgument);  // 2^6 = M/2
    EXPECT_THROW(build_tiling(make(128, 2, 4, {8, 16})), InvalidArgument);
    EXPECT_THROW(build_tiling(make(128, 2, 4, {8, 15, 16})), InvalidArgument);
    EXPECT_THROW(build_tiling(make(128, 2, 4, {8, 16, 16}, 1.0)), InvalidArgument);
    EXPECT_THROW(build_tiling(make(100, 2, 4, {8, 16, 16})), InvalidArgument);
    EXPECT_NO_THROW(build_tiling(make(128, 1, 5, {1, 8, 16, 16, 32})));
}

TEST(Tiling, BoxCountAndDirections) {
    const FrequencyTiling t = build_tiling(make(128, 2, 4, {8, 16, 16}));
    ASSERT_EQ(t.box_count(), 4u + 8u + 8u);
    const BoxSpec& b = t.boxes()[1];
    EXPECT_EQ(b.scale, 2);
    EXPECT_NEAR(b.direction.x1, std::cos(std::numbers::pi / 4), 1e-15);
    EXPECT_NEAR(b.direction.x2, std::sin(std::numbers::pi / 4), 1e-15);
    EXPECT_TRUE(t.warnings().empty());
}

TEST(Tiling, NonParabolicScalingWarns) {
    const FrequencyTiling t = build_tiling(make(128, 1, 4, {4, 4, 4, 64}));
    EXPECT_FALSE(t.warnings().empty());
}

TEST(Tiling, WindowValuesAtKnownPoints) {
    const FrequencyTiling t = build_tiling(make(128, 2, 4, {8, 16, 16}));
    // Box 0: scale 2, direction (1, 0). Centre of its radial plateau.
    const double r = std::exp2(2.5);
    EXPECT_NEAR(t.box_weight(0, {r, 0.0}), 1.0, 1e-15);
    EXPECT_NEAR(t.box_weight(0, {-r, 0.0}), 1.0, 1e-15);
    // Radial crossover at |xi| = 2^3 is shared with scale 3 in equal parts.
    EXPECT_NEAR(t.box_weight(0, {8.0, 0.0}), 0.5, 1e-15);
    // Angular crossover with the neighbouring wedge, half a wedge (pi/8) away.
    const double a = std::numbers::pi / 8;
    EXPECT_NEAR(t.box_weight(0, {r * std::cos(a), r * std::sin(a)}), 0.5, 1e-12);
    EXPECT_NEAR(t.box_weight(1, {r * std::cos(a), r * std::sin(a)}), 0.5, 1e-12);
    // Far outside the wedge.
    EXPECT_EQ(t.box_weight(0, {0.0, r}), 0.0);
}

TEST(Tiling, WindowsAreRealEvenAndBounded) {
    const FrequencyTiling t = build_tiling(make(64, 1, 4, {8, 8, 16, 16}));
    const std::size_t m = t.side();
    for (std::size_t b = 0; b < t.box_count(); ++b) {
        const auto& w = t.window(b);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                EXPECT_EQ(w(i, j), w(negated_index(i, m), negated_index(j, m)));
                EXPECT_GE(w(i, j), 0.0);
                EXPECT_LE(w(i, j), 1.0);
            }
        }
    }
}

TEST(Tiling, PartitionOfUnity) {
    for (const auto& cfg : {make(128, 2, 4, {8, 16, 16}), make(128, 1, 5, {8, 8, 16, 16, 32}),
                            make(64, 0, 4, {1, 8, 8, 16, 16}, 0.3)}) {
        const FrequencyTiling t = build_tiling(cfg);
        const std::size_t m = t.side();
        double worst = 0.0;
        double worst_inner = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t b = 0; b < t.box_count(); ++b) s += t.window(b)(i, j);
                worst = std::max(worst, std::abs(s + t.lowpass_window()(i, j) + t.highpass_window()(i, j) - 1.0));
                const double r = std::hypot(double(frequency_of_index(i, m)), double(frequency_of_index(j, m)));
                if (r >= t.r_inner_min() && r <= t.r_inner_max()) worst_inner = std::max(worst_inner, std::abs(s - 1.0));
            }
        }
        EXPECT_LE(worst, 1e-12);
        EXPECT_LE(worst_inner, 1e-12);
        const PartitionReport rep = check_partition(t);
        EXPECT_NEAR(rep.max_error_total, worst, 1e-15);
        EXPECT_GT(rep.inner_points, 0u);
    }
}

TEST(Tiling, PerfectReconstruction) {
    const FrequencyTiling t = build_tiling(make(64, 1, 4, {8, 8, 16, 16}));
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Field2D f = random_field(64, rng);
        const Decomposition d = analyze(f, t);
        ASSERT_EQ(d.channels.size(), t.box_count());
        const Field2D recon = synthesize(d.channels, t) + d.lowpass + d.highpass;
        EXPECT_LE(relative_l2(recon, f), 1e-12);
        EXPECT_LE(relative_l2(synthesize(d.channels, t), in_band(f, t)), 1e-12);
    }
}

TEST(Tiling, ChannelEnergyFollowsDirection) {
    // A plane wave along x1 at |xi| = 2^{2.5} lives in box 0 only.
    const FrequencyTiling t = build_tiling(make(128, 2, 4, {8, 16, 16}));
    const double k = std::exp2(2.5);
    const Field2D f = Field2D::from_function(128, [&](const Vec2& x) {
        return std::cos(2.0 * std::numbers::pi * std::round(k) * x.x1);
    });
    const Decomposition d = analyze(f, t);
    EXPECT_NEAR(relative_l2(d.channels[0], f), 0.0, 1e-12);
    for (std::size_t b = 1; b < t.box_count(); ++b) EXPECT_LE(d.channels[b].max_abs(), 1e-12);
}

TEST(Tiling, SizeMismatch) {
    const FrequencyTiling t = build_tiling(make(64, 1, 3, {8, 8, 16}));
    EXPECT_THROW(analyze(Field2D(32), t), SizeMismatch);
    std::vector<Field2D> too_few(2, Field2D(64));
    EXPECT_THROW(synthesize(too_few, t), SizeMismatch);
}

TEST(Tiling, ConfigBlockRoundTrip) {
    const TilingConfig c = make(256, 1, 5, {8, 8, 16, 16, 32}, 0.375);
    const std::string block = to_config_block(c);
    const ConfigDocument doc = ConfigDocument::parse(block);
    const TilingConfig back = parse_tiling_section(*doc.section("tiling"));
    EXPECT_EQ(back.side, c.side);
    EXPECT_EQ(back.k_min, c.k_min);
    EXPECT_EQ(back.k_max, c.k_max);
    EXPECT_EQ(back.wedges, c.wedges);
    EXPECT_EQ(back.beta, c.beta);
    EXPECT_THROW(parse_tiling_section(*ConfigDocument::parse("[tiling]\nfoo = 1\n").section("tiling")),
                 InvalidArgument);
}
