#include "wavefio/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wavefio/error.hpp"
#include "wavefio/field.hpp"

namespace wavefio {

namespace {

constexpr double kPi = std::numbers::pi;

// Speed is evaluated on the unit square padded by half a domain on every side.
double clamp_padded(double v) noexcept { return std::clamp(v, -0.5, 1.5); }

struct Derivative {
    Vec2 dx;
    Vec2 dxi;
};

Derivative flow(const WaveSpeed& w, const Vec2& x, const Vec2& xi) {
    const double r = norm(xi);
    if (!(r > 1e-300) || !std::isfinite(r)) {
        throw NumericalError("ray momentum underflowed to zero");
    }
    return {w(x) / r * xi, -r * w.gradient(x)};
}

void spatial_features(const WarpBasis& basis, const Vec2& y, std::vector<double>& out) {
    out.clear();
    if (basis.kind == WarpBasis::Kind::Polynomial) {
        double pa = 1.0;
        for (int a = 0; a <= basis.degree; ++a) {
            double pb = 1.0;
            for (int b = 0; b <= basis.degree; ++b) {
                out.push_back(pa * pb);
                pb *= y.x2;
            }
            pa *= y.x1;
        }
        return;
    }
    out.push_back(1.0);
    out.push_back(y.x1);
    out.push_back(y.x2);
    const int n = basis.rbf_centers;
    const double spacing = 1.0 / (n - 1);
    const double inv2s2 = 1.0 / (2.0 * spacing * spacing);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const Vec2 d = y - Vec2{a * spacing, b * spacing};
            out.push_back(std::exp(-dot(d, d) * inv2s2));
        }
    }
}

void design_row(const WarpBasis& basis, const Vec2& y, const Vec2& dir, std::vector<double>& phi,
                Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
    spatial_features(basis, y, phi);
    const auto s = static_cast<Eigen::Index>(phi.size());
    for (Eigen::Index k = 0; k < s; ++k) {
        row(k) = phi[static_cast<std::size_t>(k)];
        row(s + k) = phi[static_cast<std::size_t>(k)] * dir.x1;
        row(2 * s + k) = phi[static_cast<std::size_t>(k)] * dir.x2;
    }
}

Vec2 unit(const Vec2& v) {
    const double r = norm(v);
    if (!(r > 0.0)) throw InvalidArgument("direction must be nonzero");
    return (1.0 / r) * v;
}

}  // namespace

WaveSpeed WaveSpeed::constant(double c0) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidArgument("constant wave speed must be positive");
    WaveSpeed w;
    w.kind_ = Kind::Constant;
    w.baseline_ = c0;
    return w;
}

WaveSpeed WaveSpeed::gaussian(double z1, double z2, double z3, double amplitude, double baseline) {
    if (!(z3 > 0.0)) throw InvalidArgument("radial basis width z3 must be positive");
    if (!std::isfinite(z1) || !std::isfinite(z2) || !std::isfinite(amplitude) || !std::isfinite(baseline)) {
        throw InvalidArgument("wave speed parameters must be finite");
    }
    WaveSpeed w;
    w.kind_ = Kind::Gaussian;
    w.center_ = {z1, z2};
    w.width_ = z3;
    w.amplitude_ = amplitude;
    w.baseline_ = baseline;
    if (!(w.min_on_grid() > 0.0)) throw InvalidArgument("wave speed must be positive on the domain");
    return w;
}

double WaveSpeed::operator()(const Vec2& x) const noexcept {
    if (kind_ == Kind::Constant) return baseline_;
    const Vec2 d = Vec2{clamp_padded(x.x1), clamp_padded(x.x2)} - center_;
    return baseline_ + amplitude_ * std::exp(-dot(d, d) / (2.0 * width_ * width_));
}

Vec2 WaveSpeed::gradient(const Vec2& x) const noexcept {
    if (kind_ == Kind::Constant) return {};
    const Vec2 p{clamp_padded(x.x1), clamp_padded(x.x2)};
    const Vec2 d = p - center_;
    const double s2 = width_ * width_;
    const double g = amplitude_ * std::exp(-dot(d, d) / (2.0 * s2));
    Vec2 grad = (-g / s2) * d;
    if (p.x1 != x.x1) grad.x1 = 0.0;
    if (p.x2 != x.x2) grad.x2 = 0.0;
    return grad;
}

double WaveSpeed::min_on_grid(std::size_t n) const noexcept {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            lo = std::min(lo, (*this)({static_cast<double>(i) / n, static_cast<double>(j) / n}));
        }
    }
    return std::min(lo, (*this)(center_));
}

double WaveSpeed::max_on_grid(std::size_t n) const noexcept {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            hi = std::max(hi, (*this)({static_cast<double>(i) / n, static_cast<double>(j) / n}));
        }
    }
    return std::max(hi, (*this)(center_));
}

double hamiltonian(const WaveSpeed& w, const RayState& s) noexcept { return w(s.x) * norm(s.xi); }

RayState trace_ray(const RayState& s, const WaveSpeed& w, double T, int steps) {
    if (steps < 16) throw InvalidArgument("trace_ray needs at least 16 steps");
    if (!(norm(s.xi) > 0.0)) throw InvalidArgument("ray momentum must be nonzero");
    const double dt = T / steps;
    Vec2 x = s.x;
    Vec2 xi = s.xi;
    for (int n = 0; n < steps; ++n) {
        const Derivative k1 = flow(w, x, xi);
        const Derivative k2 = flow(w, x + 0.5 * dt * k1.dx, xi + 0.5 * dt * k1.dxi);
        const Derivative k3 = flow(w, x + 0.5 * dt * k2.dx, xi + 0.5 * dt * k2.dxi);
        const Derivative k4 = flow(w, x + dt * k3.dx, xi + dt * k3.dxi);
        x += (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        xi += (dt / 6.0) * (k1.dxi + 2.0 * k2.dxi + 2.0 * k3.dxi + k4.dxi);
    }
    if (!(norm(xi) > 1e-300)) throw NumericalError("ray momentum underflowed to zero");
    return {x, xi};
}

WarpedGrid identity_grid(std::size_t m, const Vec2& orientation, Branch branch) {
    return {canonical_grid(m), orientation, branch};
}

WarpedGrid constant_speed_warp(const Vec2& nu, double t, double c0, Branch branch, std::size_t m) {
    if (!(c0 > 0.0)) throw InvalidArgument("wave speed must be positive");
    WarpedGrid g = identity_grid(m, nu, branch);
    if (t == 0.0) return g;
    const Vec2 shift = (branch_sign(branch) * t * c0) * nu;
    for (auto& p : g.points.values()) p += shift;
    return g;
}

WarpedGrid trace_warped_grid(const Vec2& nu, const WaveSpeed& w, double T, Branch branch,
                             std::size_t m, int steps) {
    WarpedGrid g = identity_grid(m, nu, branch);
    if (T == 0.0) return g;
    const Vec2 dir = -branch_sign(branch) * unit(nu);
    const double h = 1.0 / static_cast<double>(m);
    const long pad =
        static_cast<long>(std::ceil(w.max_on_grid(m) * std::abs(T) * static_cast<double>(m))) + 2;
    const std::size_t n = m + 2 * static_cast<std::size_t>(pad);

    // Displacement of forward rays launched from a lattice that covers every
    // start point able to reach the unit square within time T.
    Array2D<Vec2> disp(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 x{(static_cast<double>(i) - pad) * h, (static_cast<double>(j) - pad) * h};
            disp(i, j) = trace_ray({x, dir}, w, T, steps).x - x;
        }
    }

    struct Local {
        Vec2 d;
        Vec2 d_dx1;
        Vec2 d_dx2;
    };
    const auto interp = [&](const Vec2& x) {
        const double u = x.x1 / h + pad;
        const double v = x.x2 / h + pad;
        const double top = static_cast<double>(n - 2);
        const double i0 = std::clamp(std::floor(u), 0.0, top);
        const double j0 = std::clamp(std::floor(v), 0.0, top);
        const double fu = u - i0;
        const double fv = v - j0;
        const auto i = static_cast<std::size_t>(i0);
        const auto j = static_cast<std::size_t>(j0);
        const Vec2 a = disp(i, j), b = disp(i + 1, j), c = disp(i, j + 1), d = disp(i + 1, j + 1);
        return Local{(1 - fu) * (1 - fv) * a + fu * (1 - fv) * b + (1 - fu) * fv * c + fu * fv * d,
                     ((1 - fv) * (b - a) + fv * (d - c)) * (1.0 / h),
                     ((1 - fu) * (c - a) + fu * (d - b)) * (1.0 / h)};
    };

    // Newton on x + D(x) = y, starting from the straight-back guess.
    for (auto& y0 : g.points.values()) {
        const Vec2 y = y0;
        Vec2 x = y - interp(y).d;
        Vec2 best = x;
        double best_res = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 30; ++it) {
            const Local l = interp(x);
            const Vec2 r = x + l.d - y;
            const double res = norm(r);
            if (res < best_res) {
                best_res = res;
                best = x;
            }
            if (res < 1e-14) break;
            const double j11 = 1.0 + l.d_dx1.x1, j12 = l.d_dx2.x1;
            const double j21 = l.d_dx1.x2, j22 = 1.0 + l.d_dx2.x2;
            const double det = j11 * j22 - j12 * j21;
            if (!(std::abs(det) > 1e-12)) break;
            x -= Vec2{(j22 * r.x1 - j12 * r.x2) / det, (-j21 * r.x1 + j11 * r.x2) / det};
        }
        y0 = best;
    }
    return g;
}

std::vector<RaySample> sample_rays(const WaveSpeed& w, double T, std::size_t count, Rng& rng,
                                   int steps) {
    std::vector<RaySample> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        RayState s;
        s.x = {rng.uniform(), rng.uniform()};
        s.xi = direction(2.0 * kPi * rng.uniform());
        out.push_back({s, trace_ray(s, w, T, steps), T});
    }
    return out;
}

std::size_t WarpBasis::spatial_size() const noexcept {
    if (kind == Kind::Polynomial) return static_cast<std::size_t>((degree + 1) * (degree + 1));
    return 3 + static_cast<std::size_t>(rbf_centers * rbf_centers);
}

std::size_t FittedWarp::bin_of(const Vec2& dir) const noexcept {
    const int n = basis_.orientation_bins;
    const double theta = std::atan2(dir.x2, dir.x1);
    long b = std::lround(theta / (2.0 * kPi / n));
    b = ((b % n) + n) % n;
    return static_cast<std::size_t>(b);
}

WarpPrediction FittedWarp::predict(const Vec2& y, const Vec2& dir) const {
    const Vec2 d = unit(dir);
    const Eigen::MatrixXd& c = coefficients_[bin_of(d)];
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(basis_.size()));
    std::vector<double> phi;
    design_row(basis_, y, d, phi, row);
    const Eigen::RowVectorXd out = row * c;
    return {{out(0), out(1)}, {out(2), out(3)}};
}

FittedWarp fit_warp(std::span<const RaySample> samples, const WarpBasis& basis, double ridge) {
    if (samples.empty()) throw InvalidArgument("fit_warp needs samples");
    if (basis.orientation_bins < 1) throw InvalidArgument("orientation_bins must be positive");
    if (basis.kind == WarpBasis::Kind::Polynomial && basis.degree < 1) {
        throw InvalidArgument("polynomial degree must be at least 1");
    }
    if (basis.kind == WarpBasis::Kind::Rbf && basis.rbf_centers < 2) {
        throw InvalidArgument("rbf lattice needs at least 2 centers per side");
    }
    if (ridge < 0.0) throw InvalidArgument("ridge must be nonnegative");

    FittedWarp fit;
    fit.basis_ = basis;
    const auto bins = static_cast<std::size_t>(basis.orientation_bins);
    std::vector<std::vector<std::size_t>> members(bins);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        members[fit.bin_of(unit(samples[s].start.xi))].push_back(s);
    }

    const auto cols = static_cast<Eigen::Index>(basis.size());
    const double sqrt_ridge = std::sqrt(ridge);
    std::vector<double> phi;
    for (std::size_t b = 0; b < bins; ++b) {
        const auto& idx = members[b];
        if (idx.empty()) {
            throw InvalidArgument("orientation bin " + std::to_string(b) + " has no samples");
        }
        const auto rows = static_cast<Eigen::Index>(idx.size());
        const Eigen::Index extra = ridge > 0.0 ? cols : 0;
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows + extra, cols);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(rows + extra, 4);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const RaySample& s = samples[idx[static_cast<std::size_t>(r)]];
            design_row(basis, s.end.x, unit(s.start.xi), phi, a.row(r));
            const Vec2 eta = unit(s.end.xi);
            rhs.row(r) << s.start.x.x1, s.start.x.x2, eta.x1, eta.x2;
        }
        if (extra > 0) a.bottomRows(extra).diagonal().setConstant(sqrt_ridge);

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < cols) {
            throw NumericalError("orientation bin " + std::to_string(b) + " is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " of " + std::to_string(cols) +
                                 "); sampling is degenerate");
        }
        fit.coefficients_.push_back(qr.solve(rhs));
        fit.counts_.push_back(idx.size());
    }
    fit.training_rms_ = endpoint_rmse(fit, samples);
    return fit;
}

double endpoint_rmse(const FittedWarp& fit, std::span<const RaySample> samples) {
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : samples) {
        const Vec2 d = fit.predict(s.end.x, s.start.xi).x - s.start.x;
        sum += dot(d, d);
    }
    return std::sqrt(sum / static_cast<double>(samples.size()));
}

WarpedGrid fitted_warped_grid(const FittedWarp& fit, const Vec2& nu, Branch branch, std::size_t m) {
    WarpedGrid g = identity_grid(m, nu, branch);
    const Vec2 dir = branch == Branch::Plus ? nu : -nu;
    for (auto& p : g.points.values()) p = fit.predict(p, dir).x;
    return g;
}

JacobianReport warp_jacobian(const WarpedGrid& grid) {
    const std::size_t m = grid.side();
    if (m < 2) throw InvalidArgument("warped grid too small for a Jacobian");
    const double h = 1.0 / static_cast<double>(m);
    const auto& p = grid.points;
    auto diff = [&](std::size_t i, std::size_t j, bool along_rows) {
        std::size_t lo = along_rows ? i : j;
        std::size_t hi = lo;
        if (lo > 0) --lo;
        if (hi + 1 < m) ++hi;
        const Vec2 a = along_rows ? p(lo, j) : p(i, lo);
        const Vec2 b = along_rows ? p(hi, j) : p(i, hi);
        return (1.0 / (static_cast<double>(hi - lo) * h)) * (b - a);
    };
    JacobianReport rep;
    rep.determinant = Array2D<double>(m, m);
    rep.min = std::numeric_limits<double>::infinity();
    rep.max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const Vec2 d1 = diff(i, j, true);   // d x / d y1
            const Vec2 d2 = diff(i, j, false);  // d x / d y2
            const double det = d1.x1 * d2.x2 - d2.x1 * d1.x2;
            rep.determinant(i, j) = det;
            rep.min = std::min(rep.min, det);
            rep.max = std::max(rep.max, det);
        }
    }
    rep.caustic = rep.min < 0.0 && rep.max > 0.0;
    return rep;
}

}  // namespace wavefio
