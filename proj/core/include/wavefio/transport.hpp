#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "wavefio/array2d.hpp"
#include "wavefio/field.hpp"

namespace wavefio {

// Probability weights on the n x n grid of points (i/n, j/n).
class DiscreteMeasure {
public:
    // Throws InvalidArgument unless weights are square, finite, nonnegative
    // and sum to 1 within 1e-12.
    explicit DiscreteMeasure(Array2D<double> weights);

    static DiscreteMeasure dirac(std::size_t n, std::size_t i, std::size_t j);

    std::size_t side() const noexcept { return w_.rows(); }
    const Array2D<double>& weights() const noexcept { return w_; }
    double operator()(std::size_t i, std::size_t j) const { return w_(i, j); }

private:
    Array2D<double> w_;
};

// |f| / ||f||_1. Throws InvalidArgument on an all-zero field.
DiscreteMeasure to_measure(const Field2D& f);

struct SinkhornOptions {
    double epsilon = 1e-3;
    int max_iter = 5000;
    double tol = 1e-9;
    // Geometric continuation in epsilon from the squared domain diameter
    // down to `epsilon`. Iterations from all stages are counted.
    bool epsilon_scaling = true;
};

struct SinkhornResult {
    // <P, C> - eps H(P), H(P) = -sum P log P. Can be negative.
    double value = 0.0;
    int iterations = 0;
    // L1 distance between the plan's marginals and (a, b).
    double marginal_violation = 0.0;
    bool converged = false;
};

// Entropic W2^2 with cost |y - y'|^2 on the unit square. The M^2 x M^2 plan
// and cost are never formed; each Sinkhorn half-step is two 1-D log-sum-exp
// passes.
SinkhornResult sinkhorn_w2(const DiscreteMeasure& a, const DiscreteMeasure& b, const SinkhornOptions& opt = {});

// W(a,b) - W(a,a)/2 - W(b,b)/2.
double sinkhorn_divergence(const DiscreteMeasure& a, const DiscreteMeasure& b, const SinkhornOptions& opt = {});

double mse(const Field2D& f, const Field2D& g);

struct SsimOptions {
    std::size_t window = 8;
    double k1 = 0.01;
    double k2 = 0.03;
};

// Mean SSIM of |f| and |g| over all fully contained window positions, with
// uniform window weights and dynamic range max(|f|, |g|).
double ssim(const Field2D& f, const Field2D& g, const SsimOptions& opt = {});

struct MetricRow {
    int delta = 0;
    double mse = 0.0;
    double ssim = 0.0;
    double w2_smoothed = 0.0;
    double w2_divergence = 0.0;
};

// Compares f with f circularly shifted by delta pixels along x1.
std::vector<MetricRow> metric_sweep(const Field2D& f, std::span<const int> shifts, const SinkhornOptions& opt = {},
                                    const SsimOptions& ssim_opt = {});

void write_metric_csv(std::ostream& os, std::span<const MetricRow> rows);

}  // namespace wavefio
