#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wavefio/field.hpp"
#include "wavefio/geometry.hpp"
#include "wavefio/polyphase.hpp"
#include "wavefio/tiling.hpp"

namespace wavefio {

// Bilinear sample of f at every point of g. The field is treated as
// samples at (i/M, j/M); points outside [0, (M-1)/M]^2 read zero.
Field2D resample(const Field2D& f, const WarpedGrid& g);

// What apply_fio does with the lowpass/highpass residual channels.
enum class ResidualMode { Drop, PassThrough };

// Box-decomposed operator: for every tiling box, the channel is optionally
// convolved with a kernel, then resampled on one warped grid per branch,
// weighted by an amplitude, and summed.
struct FioTerm {
    std::vector<WarpedGrid> grids;    // one per branch
    std::vector<double> amplitudes;   // same length as grids
    std::optional<Filter2D> kernel;   // periodic convolution before warping
};

struct FioPlan {
    std::shared_ptr<const FrequencyTiling> tiling;
    std::vector<FioTerm> terms;  // one per tiling box
    ResidualMode residuals = ResidualMode::Drop;

    // Throws SizeMismatch or InvalidArgument when the plan is inconsistent.
    void validate() const;
};

// Identity grids, unit amplitude, single branch.
FioPlan identity_plan(std::shared_ptr<const FrequencyTiling> tiling);

// Half-wave pair for constant speed: grids y -/+ t c0 nu, amplitude 1/2
// each. Approximates the propagator cos(c0 |D| t) on the directional band.
FioPlan constant_speed_plan(std::shared_ptr<const FrequencyTiling> tiling, double c0, double t);

// Same pair with grids from Hamilton-flow tracing.
FioPlan traced_plan(std::shared_ptr<const FrequencyTiling> tiling, const WaveSpeed& w, double T,
                    int steps = 512);

// Same pair with grids predicted by a fitted warp.
FioPlan fitted_plan(std::shared_ptr<const FrequencyTiling> tiling, const FittedWarp& fit);

Field2D apply_fio(const Field2D& u, const FioPlan& plan);

// Reconstruction from channels each translated by its own shift (domain
// units, one per box), resampled with zero fill.
Field2D channel_shift_demo(const Field2D& u, const FrequencyTiling& tiling, std::span<const Vec2> shifts);

// Plan on disk: a TOML-style index file (tiling block, amplitudes, grid file
// names, kernel file names) next to the grid and kernel F2D files.
void save_plan(const FioPlan& plan, const std::filesystem::path& index_path);
FioPlan load_plan(const std::filesystem::path& index_path);

}  // namespace wavefio
