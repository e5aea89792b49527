#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wavefio/geometry.hpp"
#include "wavefio/tiling.hpp"
#include "wavefio/transport.hpp"
#include "wavefio/wavesim.hpp"

namespace wavefio::cli {

// [wavespeed]: kind = "constant" uses c0; kind = "gaussian" uses the rest.
struct WaveSpeedSettings {
    std::string kind = "gaussian";
    double c0 = 1.0;
    double z1 = 0.5;
    double z2 = 0.5;
    double z3 = 0.15;
    double amplitude = -0.65;
    double baseline = 1.0;

    WaveSpeed build() const;
};

// [sim]
struct SimSettings {
    double T = 0.2;
    double cfl = 0.3;
    Boundary boundary = Boundary::Periodic;
    std::size_t snapshot_every = 0;
    int ray_steps = 128;
};

// [sinkhorn]
struct SinkhornSettings {
    SinkhornOptions options;
    std::vector<int> shifts{0, 1, 2, 4, 8};
};

// [fit]
struct FitSettings {
    std::size_t samples = 2000;
    double holdout = 0.2;  // fraction of rays kept out of the fit
    WarpBasis basis;
    double ridge = 1e-6;
};

struct RunConfig {
    TilingConfig tiling;
    WaveSpeedSettings wavespeed;
    SimSettings sim;
    SinkhornSettings sinkhorn;
    FitSettings fit;
    std::uint64_t seed = 0;  // [run] seed

    // Fully expanded configuration with every default filled in; hashing
    // this makes the fingerprint independent of formatting and omissions.
    std::string canonical() const;
    std::uint64_t hash() const;
};

// Unknown sections or keys and out-of-range values throw InvalidArgument;
// malformed syntax throws FormatError.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace wavefio::cli
