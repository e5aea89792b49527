#include "wavefio/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavefio/error.hpp"
#include "wavefio/fft.hpp"

namespace wavefio {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Array2D<double> sample_speed(const WaveSpeed& w, std::size_t m) {
    Array2D<double> c(m, m);
    const double h = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) c(i, j) = w({h * static_cast<double>(i), h * static_cast<double>(j)});
    }
    return c;
}

// out = c * Lap(c * u), periodic, without the 1/h^2 factor.
void apply_operator(const Array2D<double>& c, const Array2D<double>& u, Array2D<double>& cu, Array2D<double>& out) {
    const std::size_t m = u.rows();
    auto cv = c.values();
    auto uv = u.values();
    auto w = cu.values();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = cv[k] * uv[k];
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t ip = i + 1 == m ? 0 : i + 1;
        const std::size_t im = i == 0 ? m - 1 : i - 1;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t jp = j + 1 == m ? 0 : j + 1;
            const std::size_t jm = j == 0 ? m - 1 : j - 1;
            out(i, j) = c(i, j) * (cu(ip, j) + cu(im, j) + cu(i, jp) + cu(i, jm) - 4.0 * cu(i, j));
        }
    }
}

// Quadratic damping ramp over the outer side/16 samples on every edge,
// peak chosen for roughly 1e-3 amplitude reflection at the speed cmax.
Array2D<double> sponge_profile(std::size_t m, double cmax) {
    Array2D<double> s(m, m, 0.0);
    const std::size_t width = std::max<std::size_t>(m / 16, 1);
    const double wd = static_cast<double>(width) / static_cast<double>(m);
    const double peak = 3.0 * cmax * std::log(1e3) / (2.0 * wd);
    auto ramp = [&](std::size_t k) {
        const std::size_t d = std::min(k, m - 1 - k);
        if (d >= width) return 0.0;
        const double r = static_cast<double>(width - d) / static_cast<double>(width);
        return r * r;
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) s(i, j) = peak * std::max(ramp(i), ramp(j));
    }
    return s;
}

bool all_finite(const Array2D<double>& a) {
    return std::all_of(a.values().begin(), a.values().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

Field2D spectral_propagate(const Field2D& p0, const Field2D& v0, double c0, double t) {
    if (p0.side() != v0.side()) throw SizeMismatch("spectral_propagate: p0 and v0 differ in size");
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw InvalidArgument("spectral_propagate needs a positive speed");
    if (!std::isfinite(t)) throw InvalidArgument("spectral_propagate needs a finite time");
    const std::size_t m = p0.side();
    const Spectrum2D ph = fft2(p0);
    const Spectrum2D vh = fft2(v0);
    Spectrum2D out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double k1 = static_cast<double>(frequency_of_index(i, m));
        for (std::size_t j = 0; j < m; ++j) {
            const double k2 = static_cast<double>(frequency_of_index(j, m));
            const double w = kTwoPi * c0 * std::hypot(k1, k2);
            if (w == 0.0) {
                out(i, j) = ph(i, j) + t * vh(i, j);
            } else {
                out(i, j) = ph(i, j) * std::cos(w * t) + vh(i, j) * (std::sin(w * t) / w);
            }
        }
    }
    return ifft2(out);
}

Field2D spectral_propagate(const Field2D& p0, const Field2D& v0, const WaveSpeed& w, double t) {
    if (!w.is_constant()) throw InvalidArgument("spectral_propagate requires a constant wave speed");
    return spectral_propagate(p0, v0, w.c0(), t);
}

double SimConfig::cfl() const {
    return dt * speed.max_on_grid(side) * static_cast<double>(side);
}

SimConfig make_sim_config(std::size_t side, const WaveSpeed& speed, double T, double cfl, Boundary boundary) {
    if (!is_valid_side(side)) throw InvalidArgument("simulation side must be a power of two >= 8");
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("simulation duration must be positive");
    if (!(cfl > 0.0)) throw InvalidArgument("CFL target must be positive");
    SimConfig cfg;
    cfg.side = side;
    cfg.speed = speed;
    cfg.boundary = boundary;
    const double dt_max = cfl / (static_cast<double>(side) * speed.max_on_grid(side));
    cfg.steps = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-12));
    cfg.steps = std::max<std::size_t>(cfg.steps, 1);
    cfg.dt = T / static_cast<double>(cfg.steps);
    return cfg;
}

WaveState fdtd_propagate(const Field2D& p0, const Field2D& v0, const SimConfig& cfg, const SnapshotFn& snapshot) {
    const std::size_t m = cfg.side;
    if (p0.side() != m || v0.side() != m) throw SizeMismatch("fdtd_propagate: fields do not match config side");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidArgument("fdtd_propagate needs a positive dt");
    const double cfl = cfg.cfl();
    if (cfl > cfg.cfl_limit) {
        throw InvalidArgument("CFL number " + std::to_string(cfl) + " exceeds limit " +
                              std::to_string(cfg.cfl_limit));
    }

    const Array2D<double> c = sample_speed(cfg.speed, m);
    const Array2D<double> sigma =
        cfg.boundary == Boundary::Sponge ? sponge_profile(m, cfg.speed.max_on_grid(m)) : Array2D<double>(m, m, 0.0);
    const double dt = cfg.dt;
    const double r = dt * dt * static_cast<double>(m) * static_cast<double>(m);

    Array2D<double> prev = p0.array();
    Array2D<double> cur(m, m), next(m, m), lap(m, m), work(m, m);

    apply_operator(c, prev, work, lap);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cur(i, j) = prev(i, j) + dt * v0(i, j) + 0.5 * r * lap(i, j) - 0.5 * dt * dt * sigma(i, j) * v0(i, j);
        }
    }

    auto state = [&](std::size_t step) {
        return WaveState{Field2D(cur), Field2D(prev), dt * static_cast<double>(step), dt, cfl, step, c};
    };

    for (std::size_t step = 1; step < cfg.steps; ++step) {
        if (cfg.snapshot_every != 0 && snapshot && step % cfg.snapshot_every == 0) snapshot(state(step));
        apply_operator(c, cur, work, lap);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double s = 0.5 * dt * sigma(i, j);
                next(i, j) = (2.0 * cur(i, j) - (1.0 - s) * prev(i, j) + r * lap(i, j)) / (1.0 + s);
            }
        }
        std::swap(prev, cur);
        std::swap(cur, next);
        if (step % 64 == 0 && !all_finite(cur)) {
            throw NumericalError("fdtd_propagate: non-finite values at step " + std::to_string(step + 1));
        }
    }
    if (!all_finite(cur)) {
        throw NumericalError("fdtd_propagate: non-finite values at step " + std::to_string(cfg.steps));
    }
    WaveState out = state(cfg.steps);
    if (cfg.snapshot_every != 0 && snapshot && cfg.steps % cfg.snapshot_every == 0) snapshot(out);
    return out;
}

double energy(const WaveState& s) {
    const std::size_t m = s.p.side();
    if (s.q.side() != m || s.speed.rows() != m || s.speed.cols() != m) {
        throw SizeMismatch("energy: state arrays disagree in size");
    }
    if (!(s.dt > 0.0)) throw InvalidArgument("energy needs a positive dt");
    Array2D<double> work(m, m), lap(m, m);
    apply_operator(s.speed, s.p.array(), work, lap);
    const double h2 = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    double kinetic = 0.0, potential = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = (s.p(i, j) - s.q(i, j)) / s.dt;
            kinetic += d * d;
            // lap already carries c(i, j); divide h^2 back in.
            potential -= lap(i, j) * s.q(i, j) / h2;
        }
    }
    return 0.5 * kinetic * h2 + 0.5 * potential * h2;
}

}  // namespace wavefio
