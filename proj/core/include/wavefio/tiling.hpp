#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavefio/array2d.hpp"
#include "wavefio/config.hpp"
#include "wavefio/field.hpp"
#include "wavefio/vec2.hpp"

namespace wavefio {

struct TilingConfig {
    std::size_t side = 128;
    int k_min = 2;
    int k_max = 4;
    // Full-circle wedge count per scale, k_min first. Even, or 1 for an
    // isotropic annulus.
    std::vector<int> wedges{8, 16, 16};
    // Width of each raised-cosine transition, in octaves radially and in
    // wedge widths angularly. Must lie in (0, 1).
    double beta = 0.5;
};

// One directional box B_{nu,k}. Antipodal wedges are merged, so a box
// covers the two angular sectors around +direction and -direction.
struct BoxSpec {
    int scale = 0;
    int orientation = 0;     // pair index in [0, max(1, wedge_count / 2))
    int wedge_count = 1;     // full-circle wedges at this scale
    Vec2 direction;          // unit vector at angle 2 pi orientation / wedge_count
    double r_lo = 0.0;       // radial support, cycles per unit domain
    double r_hi = 0.0;
    double angular_half_width = 0.0;  // radians, including the transition
};

// Dyadic-parabolic partition of the frequency plane. Every window is
// sampled on the M x M DFT grid (standard index order) and the windows,
// together with a lowpass and a highpass residual, sum to one at every
// frequency. The windows play the role of chi^2: analysis multiplies by
// them directly.
class FrequencyTiling {
public:
    // Throws InvalidArgument on a Nyquist violation (2^k_max >= M/2), an odd
    // wedge count other than 1, a wedge list of the wrong length or beta
    // outside (0, 1). Irregular angular scaling only produces warnings().
    static FrequencyTiling build(const TilingConfig& config);

    const TilingConfig& config() const noexcept { return config_; }
    std::size_t side() const noexcept { return config_.side; }
    std::span<const BoxSpec> boxes() const noexcept { return boxes_; }
    std::size_t box_count() const noexcept { return boxes_.size(); }

    const Array2D<double>& window(std::size_t box) const { return windows_.at(box); }
    const Array2D<double>& lowpass_window() const noexcept { return lowpass_; }
    const Array2D<double>& highpass_window() const noexcept { return highpass_; }

    // Radii where the directional boxes begin and stop contributing.
    double r_min() const noexcept;
    double r_max() const noexcept;
    // Band on which the directional windows alone sum to one.
    double r_inner_min() const noexcept;
    double r_inner_max() const noexcept;

    // Analytic window of a box at an arbitrary frequency, before the
    // Nyquist symmetrization applied to the sampled windows.
    double box_weight(std::size_t box, const Vec2& xi) const;
    double lowpass_weight(const Vec2& xi) const;
    double highpass_weight(const Vec2& xi) const;

    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    TilingConfig config_;
    std::vector<BoxSpec> boxes_;
    std::vector<Array2D<double>> windows_;
    Array2D<double> lowpass_;
    Array2D<double> highpass_;
    std::vector<std::string> warnings_;
};

inline FrequencyTiling build_tiling(const TilingConfig& config) {
    return FrequencyTiling::build(config);
}

// Smooth step: 0 for x <= -1, 1 for x >= 1, sin^2 of a Meyer polynomial in
// between, so that step(x) + step(-x) == 1.
double smooth_step(double x) noexcept;

struct Decomposition {
    std::vector<Field2D> channels;  // one per box, in boxes() order
    Field2D lowpass;
    Field2D highpass;
};

// u_{nu,k} = ifft2(window * fft2(f)) for every box, plus the residuals.
Decomposition analyze(const Field2D& f, const FrequencyTiling& tiling);

// Plain sum of the directional channels.
Field2D synthesize(std::span<const Field2D> channels, const FrequencyTiling& tiling);

// Directional (in-band) part of f, equal to synthesize(analyze(f).channels).
Field2D in_band(const Field2D& f, const FrequencyTiling& tiling);

// Largest |sum of all windows - 1| over the grid and over the band where
// the directional windows alone must sum to one.
struct PartitionReport {
    double max_error_total = 0.0;
    double max_error_inner = 0.0;
    std::size_t inner_points = 0;
};
PartitionReport check_partition(const FrequencyTiling& tiling);

// "[tiling]" section in the TOML-style configuration format, and back.
// Parsing rejects unknown keys and fills missing ones with defaults.
std::string to_config_block(const TilingConfig& config);
TilingConfig parse_tiling_section(const ConfigSection& section);

}  // namespace wavefio
