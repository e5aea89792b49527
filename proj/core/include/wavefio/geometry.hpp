#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavefio/array2d.hpp"
#include "wavefio/random.hpp"
#include "wavefio/vec2.hpp"

namespace wavefio {

// Background wave speed on the unit square, in domain units per time unit.
// Either constant, or a Gaussian radial basis bump
//   c(x) = baseline + amplitude * exp(-|x - (z1, z2)|^2 / (2 z3^2)).
// The formula holds on the padded square [-0.5, 1.5]^2, which contains every
// ray that starts in the domain and travels less than half a domain; beyond
// it the speed is extended by its value at the nearest padded-boundary point.
class WaveSpeed {
public:
    enum class Kind { Constant, Gaussian };

    static WaveSpeed constant(double c0);
    static WaveSpeed gaussian(double z1, double z2, double z3, double amplitude, double baseline);

    Kind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == Kind::Constant; }

    double operator()(const Vec2& x) const noexcept;
    Vec2 gradient(const Vec2& x) const noexcept;

    // Extremes over a (n+1) x (n+1) sample lattice of the unit square.
    double min_on_grid(std::size_t n = 128) const noexcept;
    double max_on_grid(std::size_t n = 128) const noexcept;

    double c0() const noexcept { return baseline_; }
    Vec2 center() const noexcept { return center_; }
    double width() const noexcept { return width_; }
    double amplitude() const noexcept { return amplitude_; }
    double baseline() const noexcept { return baseline_; }

private:
    WaveSpeed() = default;

    Kind kind_ = Kind::Constant;
    Vec2 center_;
    double width_ = 1.0;
    double amplitude_ = 0.0;
    double baseline_ = 1.0;
};

// Phase-space point. Momentum in cycles per unit domain, never zero.
struct RayState {
    Vec2 x;
    Vec2 xi;
};

struct RaySample {
    RayState start;  // t = 0
    RayState end;    // t = T
    double T = 0.0;
};

// H(x, xi) = c(x) |xi|.
double hamiltonian(const WaveSpeed& w, const RayState& s) noexcept;

// Integrates x' = c xi/|xi|, xi' = -|xi| grad c with classical RK4 over
// `steps` uniform steps. Negative T integrates backward. Throws
// InvalidArgument for steps < 16 and NumericalError if |xi| underflows.
RayState trace_ray(const RayState& s, const WaveSpeed& w, double T, int steps);

// Half-wave branch. Plus: the packet moved along +nu, so its source lies
// behind it, T_nu(y) = y - t c nu for constant speed. Minus: y + t c nu.
enum class Branch { Plus, Minus };

inline double branch_sign(Branch b) noexcept { return b == Branch::Plus ? -1.0 : 1.0; }

// Per-orientation warped sampling grid, points(i, j) = T_nu(y_ij).
struct WarpedGrid {
    Array2D<Vec2> points;
    Vec2 orientation;
    Branch branch = Branch::Plus;

    std::size_t side() const noexcept { return points.rows(); }
};

WarpedGrid identity_grid(std::size_t m, const Vec2& orientation = {1.0, 0.0},
                         Branch branch = Branch::Plus);

// Exact straight-characteristic warp y -/+ t c0 nu.
WarpedGrid constant_speed_warp(const Vec2& nu, double t, double c0, Branch branch, std::size_t m);

// Start point of the ray that leaves with direction +nu (Plus) or -nu (Minus)
// and lands on grid point y at time T. Forward rays are traced from a padded
// lattice and the landing map is inverted by Newton iteration on its bilinear
// interpolant.
WarpedGrid trace_warped_grid(const Vec2& nu, const WaveSpeed& w, double T, Branch branch,
                             std::size_t m, int steps = 512);

// Uniform positions in the unit square, uniform unit directions.
std::vector<RaySample> sample_rays(const WaveSpeed& w, double T, std::size_t count, Rng& rng,
                                   int steps = 512);

struct WarpBasis {
    enum class Kind { Polynomial, Rbf };
    Kind kind = Kind::Rbf;
    // Tensor-product monomials y1^a y2^b with a, b <= degree.
    int degree = 1;
    // Gaussian bumps on a centers x centers lattice over [0,1]^2, width one
    // lattice spacing, plus the affine monomials.
    int rbf_centers = 8;
    // Samples are binned by the direction of their start momentum into this
    // many equal sectors centered on angles 2 pi b / bins.
    int orientation_bins = 4;

    std::size_t spatial_size() const noexcept;
    // Coefficients per bin: spatial terms times {1, dir1, dir2}.
    std::size_t size() const noexcept { return 3 * spatial_size(); }
};

struct WarpPrediction {
    Vec2 x;    // start position
    Vec2 eta;  // end momentum direction
};

// Displacement model fitted per orientation bin by ridge least squares.
// Maps (end position y, start momentum direction) to the start position
// and end momentum direction.
class FittedWarp {
public:
    WarpPrediction predict(const Vec2& y, const Vec2& dir) const;
    std::size_t bin_of(const Vec2& dir) const noexcept;

    const WarpBasis& basis() const noexcept { return basis_; }
    double training_rms() const noexcept { return training_rms_; }
    std::span<const std::size_t> bin_counts() const noexcept { return counts_; }

private:
    friend FittedWarp fit_warp(std::span<const RaySample>, const WarpBasis&, double);

    WarpBasis basis_;
    std::vector<Eigen::MatrixXd> coefficients_;  // per bin, size() x 4
    std::vector<std::size_t> counts_;
    double training_rms_ = 0.0;
};

// Throws InvalidArgument on an empty sample set or an empty bin, and
// NumericalError when a bin's regularized system is rank deficient.
FittedWarp fit_warp(std::span<const RaySample> samples, const WarpBasis& basis, double ridge);

// RMS of |predicted start - true start| over the samples.
double endpoint_rmse(const FittedWarp& fit, std::span<const RaySample> samples);

// Warped grid from a fitted model: Plus uses direction nu, Minus -nu.
WarpedGrid fitted_warped_grid(const FittedWarp& fit, const Vec2& nu, Branch branch, std::size_t m);

struct JacobianReport {
    Array2D<double> determinant;  // d T_nu / d y, per grid point
    double min = 0.0;
    double max = 0.0;
    bool caustic = false;  // determinant changes sign
};

// Central differences in the interior, one-sided on the border.
JacobianReport warp_jacobian(const WarpedGrid& grid);

}  // namespace wavefio

#include <filesystem>

namespace wavefio {

// Ray datasets as CSV with header x1,x2,xi1,xi2,y1,y2,eta1,eta2,T.
void write_rays_csv(std::span<const RaySample> rays, const std::filesystem::path& path);
std::vector<RaySample> read_rays_csv(const std::filesystem::path& path);

// Warped grids as two stacked F2D records: x1 coordinates, then x2.
void write_warped_grid(const WarpedGrid& g, const std::filesystem::path& path);
WarpedGrid read_warped_grid(const std::filesystem::path& path, const Vec2& orientation = {1.0, 0.0},
                            Branch branch = Branch::Plus);

}  // namespace wavefio
