#pragma once

#include <filesystem>
#include <iosfwd>

#include "run_config.hpp"

namespace wavefio::cli {

struct CommandContext {
    RunConfig config;
    std::filesystem::path out_dir = ".";
    std::ostream* log = nullptr;  // human-readable summary; may be null
};

// Each command writes its outputs into ctx.out_dir, appends a manifest
// record and returns the process exit code. Errors propagate as
// exceptions.

// channels.f2d (stack, tiling box order), lowpass.f2d, highpass.f2d and
// decompose_report.json with partition and reconstruction errors.
int cmd_decompose(const CommandContext& ctx, const std::filesystem::path& input);

// rays.csv with fit.samples rays over sim.T.
int cmd_raytrace(const CommandContext& ctx);

// warp_plan.toml plus its grid files, and fit_report.json.
int cmd_fit_warp(const CommandContext& ctx, const std::filesystem::path& rays);

// forward.f2d (field after sim.T), oracle.f2d (forward field propagated
// again with zero velocity, restricted to the tiling band), fio_recon.f2d
// and rtc_report.json.
int cmd_rtc(const CommandContext& ctx, const std::filesystem::path& input);

// metrics.csv over sinkhorn.shifts.
int cmd_metric_sweep(const CommandContext& ctx, const std::filesystem::path& input);

// Random K x K filter and 64 x 64 image; compares the polyphase network
// with direct periodic convolution. Prints a PASS/FAIL line; exit code 1
// on FAIL.
int cmd_polyphase_check(const CommandContext& ctx, int kernel_side, int levels);

}  // namespace wavefio::cli
