#pragma once

#include <cstddef>
#include <functional>

#include "wavefio/array2d.hpp"
#include "wavefio/field.hpp"
#include "wavefio/geometry.hpp"

namespace wavefio {

// Exact constant-speed solution of u_tt = c0^2 Lap u on the periodic unit
// square: p^(xi) cos(w t) + v^(xi) sin(w t) / w with w = 2 pi c0 |xi|, and
// p^ + t v^ on the zero mode. Negative t runs backward.
Field2D spectral_propagate(const Field2D& p0, const Field2D& v0, double c0, double t);

// Same, taking the speed from a WaveSpeed; throws InvalidArgument unless it
// is constant.
Field2D spectral_propagate(const Field2D& p0, const Field2D& v0, const WaveSpeed& w, double t);

enum class Boundary { Periodic, Sponge };

// Leapfrog schedule for u_tt = c Lap(c u) with the periodic 5-point
// Laplacian, h = 1/side.
struct SimConfig {
    std::size_t side = 128;
    WaveSpeed speed = WaveSpeed::constant(1.0);
    double dt = 0.0;
    std::size_t steps = 0;
    double cfl_limit = 0.5;
    Boundary boundary = Boundary::Periodic;
    std::size_t snapshot_every = 0;  // 0 disables the snapshot callback

    // max c * dt / h over the grid.
    double cfl() const;
};

// Smallest step count with CFL number at most `cfl` that lands exactly on
// duration T.
SimConfig make_sim_config(std::size_t side, const WaveSpeed& speed, double T, double cfl,
                          Boundary boundary = Boundary::Periodic);

struct WaveState {
    Field2D p;       // u at time t
    Field2D q;       // u at time t - dt
    double t = 0.0;
    double dt = 0.0;
    double cfl = 0.0;
    std::size_t step = 0;
    Array2D<double> speed;  // c sampled on the grid
};

using SnapshotFn = std::function<void(const WaveState&)>;

// Throws InvalidArgument when the CFL number exceeds cfg.cfl_limit or
// the sizes disagree, and NumericalError naming the step when the solution
// stops being finite.
WaveState fdtd_propagate(const Field2D& p0, const Field2D& v0, const SimConfig& cfg,
                         const SnapshotFn& snapshot = {});

// Discrete leapfrog energy between the two stored levels,
//   1/2 |(p - q)/dt|^2 h^2 + 1/2 <-Lap(c p), c q> h^2,
// conserved exactly by the periodic scheme.
double energy(const WaveState& s);

}  // namespace wavefio
