#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "wavefio/error.hpp"

namespace {

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const wavefio::InvalidArgument*>(&e)) return "invalid_argument";
    if (dynamic_cast<const wavefio::SizeMismatch*>(&e)) return "size_mismatch";
    if (dynamic_cast<const wavefio::FormatError*>(&e)) return "format_error";
    if (dynamic_cast<const wavefio::NumericalError*>(&e)) return "numerical_error";
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return "io_error";
    if (dynamic_cast<const wavefio::Error*>(&e)) return "error";
    return "internal_error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional wave-packet decomposition, ray geometry and warped-grid FIO experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "TOML-style run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "64-bit seed; overrides [run] seed");
    app.add_option("--out", out_dir, "Output directory (created if missing)");

    std::string input;
    auto* decompose = app.add_subcommand("decompose", "Split a field into tiling channels");
    decompose->add_option("input", input, "Input F2D field")->required();

    auto* raytrace = app.add_subcommand("raytrace", "Sample Hamilton-flow rays into rays.csv");
    std::optional<std::size_t> samples;
    raytrace->add_option("--samples", samples, "Ray count; overrides [fit] samples")->check(CLI::PositiveNumber);

    auto* fit = app.add_subcommand("fit-warp", "Fit warped grids to a ray dataset");
    fit->add_option("rays", input, "Ray CSV from raytrace")->required();

    auto* rtc = app.add_subcommand("rtc", "Reverse time continuation with the warped-grid FIO");
    rtc->add_option("input", input, "Initial pressure F2D field")->required();

    auto* sweep = app.add_subcommand("metric-sweep", "MSE, SSIM and Sinkhorn metrics against shifted copies");
    sweep->add_option("input", input, "Input F2D field")->required();

    int kernel_side = 9;
    int levels = 1;
    auto* poly = app.add_subcommand("polyphase-check", "Compare the polyphase network with direct convolution");
    poly->add_option("--K", kernel_side, "Odd filter side")->capture_default_str();
    poly->add_option("--levels", levels, "Recursion levels")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        wavefio::cli::CommandContext ctx;
        if (!config_path.empty()) ctx.config = wavefio::cli::load_run_config(config_path);
        if (seed) ctx.config.seed = *seed;
        if (samples) ctx.config.fit.samples = *samples;
        ctx.out_dir = out_dir;
        ctx.log = &std::cerr;

        if (*decompose) return wavefio::cli::cmd_decompose(ctx, input);
        if (*raytrace) return wavefio::cli::cmd_raytrace(ctx);
        if (*fit) return wavefio::cli::cmd_fit_warp(ctx, input);
        if (*rtc) return wavefio::cli::cmd_rtc(ctx, input);
        if (*sweep) return wavefio::cli::cmd_metric_sweep(ctx, input);
        if (*poly) return wavefio::cli::cmd_polyphase_check(ctx, kernel_side, levels);
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = error_kind(e);
        err["command"] = command;
        err["message"] = e.what();
        std::cerr << err.dump() << '\n';
        return 2;
    }
    return 1;
}
