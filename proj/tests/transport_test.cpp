#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"
#include "wavefio/error.hpp"
#include "wavefio/transport.hpp"

using namespace wavefio;
using wavefio::testing::exact_ot;
using wavefio::testing::random_field;
using wavefio::testing::wave_packet;

namespace {

DiscreteMeasure random_measure(std::size_t n, Rng& rng) {
    Array2D<double> w(n, n);
    double s = 0.0;
    for (auto& v : w.values()) {
        v = rng.uniform() + 0.05;
        s += v;
    }
    for (auto& v : w.values()) v /= s;
    return DiscreteMeasure(std::move(w));
}

double textbook_mse(const Field2D& f, const Field2D& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.side(); ++i) {
        for (std::size_t j = 0; j < f.side(); ++j) s += (f(i, j) - g(i, j)) * (f(i, j) - g(i, j));
    }
    return s / static_cast<double>(f.side() * f.side());
}

double textbook_ssim(const Field2D& f, const Field2D& g, std::size_t w) {
    const std::size_t m = f.side();
    double range = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) range = std::max({range, std::abs(f(i, j)), std::abs(g(i, j))});
    }
    const double c1 = (0.01 * range) * (0.01 * range);
    const double c2 = (0.03 * range) * (0.03 * range);
    const double nw = static_cast<double>(w * w);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + w <= m; ++i) {
        for (std::size_t j = 0; j + w <= m; ++j) {
            double mx = 0.0, my = 0.0;
            for (std::size_t a = 0; a < w; ++a) {
                for (std::size_t b = 0; b < w; ++b) {
                    mx += std::abs(f(i + a, j + b));
                    my += std::abs(g(i + a, j + b));
                }
            }
            mx /= nw;
            my /= nw;
            double vx = 0.0, vy = 0.0, cxy = 0.0;
            for (std::size_t a = 0; a < w; ++a) {
                for (std::size_t b = 0; b < w; ++b) {
                    const double dx = std::abs(f(i + a, j + b)) - mx;
                    const double dy = std::abs(g(i + a, j + b)) - my;
                    vx += dx * dx;
                    vy += dy * dy;
                    cxy += dx * dy;
                }
            }
            vx /= nw - 1.0;
            vy /= nw - 1.0;
            cxy /= nw - 1.0;
            total += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

Field2D packet64() { return wave_packet(64, {0.5, 0.5}, 0.12, 10.0, {1.0, 0.0}); }

}  // namespace

TEST(Measure, FromField) {
    Array2D<double> a(8, 8, 0.0);
    a(3, 5) = -2.5;
    const DiscreteMeasure d = to_measure(Field2D(std::move(a)));
    EXPECT_EQ(d(3, 5), 1.0);
    EXPECT_EQ(d(0, 0), 0.0);

    Rng rng(1);
    const Field2D f = random_field(16, rng);
    const DiscreteMeasure p = to_measure(f);
    const DiscreteMeasure q = to_measure(-1.0 * f);
    double s = 0.0;
    for (double v : p.weights().values()) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_EQ(p.weights(), q.weights());
    EXPECT_THROW(to_measure(Field2D(8)), InvalidArgument);
}

TEST(Measure, Validation) {
    EXPECT_THROW(DiscreteMeasure(Array2D<double>(4, 4, 0.1)), InvalidArgument);
    Array2D<double> neg(2, 2, 0.5);
    neg(0, 0) = -0.5;
    EXPECT_THROW(DiscreteMeasure(std::move(neg)), InvalidArgument);
    EXPECT_THROW(DiscreteMeasure(Array2D<double>(2, 3, 1.0 / 6)), InvalidArgument);
    EXPECT_NO_THROW(DiscreteMeasure(Array2D<double>(4, 4, 1.0 / 16)));
}

TEST(Sinkhorn, SameDiracIsFree) {
    const auto a = DiscreteMeasure::dirac(8, 2, 6);
    const SinkhornResult r = sinkhorn_w2(a, a);
    EXPECT_NEAR(r.value, 0.0, 1e-12);
    EXPECT_TRUE(r.converged);
}

TEST(Sinkhorn, TwoDiracsMatchSquaredDistance) {
    SinkhornOptions opt;
    opt.epsilon = 1e-4;
    const SinkhornResult r = sinkhorn_w2(DiscreteMeasure::dirac(16, 0, 0), DiscreteMeasure::dirac(16, 8, 0), opt);
    EXPECT_NEAR(r.value, 0.25, 2e-3);
}

TEST(Sinkhorn, Symmetry) {
    Rng rng(2);
    const auto a = random_measure(8, rng);
    const auto b = random_measure(8, rng);
    SinkhornOptions opt;
    opt.epsilon = 1e-2;
    opt.tol = 1e-12;
    EXPECT_NEAR(sinkhorn_w2(a, b, opt).value, sinkhorn_w2(b, a, opt).value, 1e-10);
}

TEST(Sinkhorn, MarginalsWithinTolerance) {
    Rng rng(3);
    const auto a = random_measure(16, rng);
    const auto b = random_measure(16, rng);
    const SinkhornResult r = sinkhorn_w2(a, b);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.marginal_violation, 1e-9);
    EXPECT_GT(r.iterations, 0);
}

TEST(Sinkhorn, MatchesExactTransportOnSmallGrids) {
    Rng rng(4);
    SinkhornOptions opt;
    opt.epsilon = 1e-4;
    opt.max_iter = 1000000;
    for (int n = 0; n < 5; ++n) {
        const auto a = random_measure(4, rng);
        const auto b = random_measure(4, rng);
        const SinkhornResult r = sinkhorn_w2(a, b, opt);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(r.value, exact_ot(a, b), 1e-3);
    }
}

TEST(Sinkhorn, ExactOracleOnKnownCase) {
    // Half the mass moves one lattice step, half stays.
    Array2D<double> wa(4, 4, 0.0), wb(4, 4, 0.0);
    wa(0, 0) = 0.5;
    wa(1, 1) = 0.5;
    wb(0, 0) = 0.5;
    wb(1, 2) = 0.5;
    EXPECT_NEAR(exact_ot(DiscreteMeasure(std::move(wa)), DiscreteMeasure(std::move(wb))), 0.5 / 16, 1e-15);
}

TEST(Sinkhorn, ValueNonIncreasingInEpsilon) {
    Rng rng(5);
    const auto a = random_measure(8, rng);
    const auto b = random_measure(8, rng);
    double prev = -std::numeric_limits<double>::infinity();
    for (double eps : {0.1, 0.01, 0.001}) {
        SinkhornOptions opt;
        opt.epsilon = eps;
        const double v = sinkhorn_w2(a, b, opt).value;
        EXPECT_GE(v, prev) << "epsilon " << eps;
        prev = v;
    }
}

TEST(Sinkhorn, BudgetExhaustionIsFlagged) {
    Rng rng(6);
    const auto a = random_measure(16, rng);
    const auto b = random_measure(16, rng);
    SinkhornOptions opt;
    opt.max_iter = 3;
    const SinkhornResult r = sinkhorn_w2(a, b, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_TRUE(std::isfinite(r.value));
    opt.epsilon = 0.0;
    EXPECT_THROW(sinkhorn_w2(a, b, opt), InvalidArgument);
    EXPECT_THROW(sinkhorn_w2(a, random_measure(8, rng)), SizeMismatch);
}

TEST(Divergence, IdentitySymmetryAndSign) {
    Rng rng(7);
    const auto a = random_measure(8, rng);
    const auto b = random_measure(8, rng);
    SinkhornOptions opt;
    opt.epsilon = 1e-2;
    opt.tol = 1e-12;
    EXPECT_NEAR(sinkhorn_divergence(a, a, opt), 0.0, 1e-8);
    const double ab = sinkhorn_divergence(a, b, opt);
    EXPECT_NEAR(ab, sinkhorn_divergence(b, a, opt), 1e-10);
    EXPECT_GE(ab, -1e-9);
}

TEST(Divergence, GrowsWithBumpShift) {
    const Field2D f = wavefio::testing::gaussian_bump(32, {0.4, 0.5}, 0.06);
    double prev = 0.0;
    for (long d : {1, 2, 4, 8}) {
        const double s = sinkhorn_divergence(to_measure(f), to_measure(circular_shift(f, d, 0)));
        EXPECT_GT(s, prev) << "shift " << d;
        prev = s;
    }
}

TEST(Metrics, MseAndSsimAgainstScalarLoops) {
    Rng rng(8);
    const Field2D f = random_field(32, rng);
    const Field2D g = random_field(32, rng);
    EXPECT_NEAR(mse(f, g), textbook_mse(f, g), 1e-12);
    EXPECT_NEAR(ssim(f, g), textbook_ssim(f, g, 8), 1e-10);
    const Field2D p = packet64();
    const Field2D q = circular_shift(p, 3, 1);
    EXPECT_NEAR(mse(p, q), textbook_mse(p, q), 1e-12);
    EXPECT_NEAR(ssim(p, q), textbook_ssim(p, q, 8), 1e-10);
}

TEST(Metrics, IdentityAndBounds) {
    Rng rng(9);
    const Field2D f = random_field(16, rng);
    EXPECT_EQ(mse(f, f), 0.0);
    EXPECT_NEAR(ssim(f, f), 1.0, 1e-12);
    for (int n = 0; n < 10; ++n) {
        const double s = ssim(random_field(16, rng), random_field(16, rng));
        EXPECT_GE(s, -1.0);
        EXPECT_LE(s, 1.0);
    }
    EXPECT_THROW(mse(f, Field2D(8)), SizeMismatch);
    EXPECT_THROW(ssim(f, Field2D(8)), SizeMismatch);
}

TEST(Metrics, MseCycleSkipsOnOscillatoryPacket) {
    const Field2D p = packet64();
    std::vector<double> curve;
    for (long d = 1; d <= 8; ++d) curve.push_back(mse(p, circular_shift(p, d, 0)));
    bool dips = false;
    for (std::size_t k = 1; k < curve.size(); ++k) dips = dips || curve[k] < curve[k - 1];
    EXPECT_TRUE(dips);
}

TEST(MetricSweep, RowsAndZeroShift) {
    const Field2D p = wave_packet(32, {0.5, 0.5}, 0.1, 5.0, {1.0, 0.0});
    const std::vector<int> shifts{0, 1, 2};
    SinkhornOptions opt;
    opt.epsilon = 1e-2;
    const auto rows = metric_sweep(p, shifts, opt);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].delta, 0);
    EXPECT_EQ(rows[0].mse, 0.0);
    EXPECT_NEAR(rows[0].ssim, 1.0, 1e-12);
    EXPECT_NEAR(rows[0].w2_divergence, 0.0, 1e-8);
    EXPECT_EQ(rows[2].delta, 2);

    std::ostringstream os;
    write_metric_csv(os, rows);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "delta,mse,ssim,w2_smoothed,w2_divergence");
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    EXPECT_EQ(lines, 3);
}
