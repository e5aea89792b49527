#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "manifest.hpp"
#include "wavefio/error.hpp"
#include "wavefio/field_io.hpp"
#include "wavefio/fio.hpp"
#include "wavefio/geometry.hpp"
#include "wavefio/polyphase.hpp"
#include "wavefio/random.hpp"
#include "wavefio/tiling.hpp"
#include "wavefio/transport.hpp"
#include "wavefio/wavesim.hpp"

namespace wavefio::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_json(const json& j, const fs::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

void prepare(const CommandContext& ctx) { fs::create_directories(ctx.out_dir); }

std::ostream& log(const CommandContext& ctx) {
    static std::ostream null_stream(nullptr);
    return ctx.log ? *ctx.log : null_stream;
}

Field2D load_input(const fs::path& input, const TilingConfig& tiling) {
    Field2D f = read_field(input);
    if (f.side() != tiling.side) {
        throw SizeMismatch(input.string() + " has side " + std::to_string(f.side()) + " but tiling.side is " +
                           std::to_string(tiling.side));
    }
    return f;
}

}  // namespace

int cmd_decompose(const CommandContext& ctx, const fs::path& input) {
    prepare(ctx);
    const Field2D f = load_input(input, ctx.config.tiling);
    const FrequencyTiling tiling = build_tiling(ctx.config.tiling);
    const Decomposition d = analyze(f, tiling);
    const PartitionReport pr = check_partition(tiling);
    const Field2D recon = synthesize(d.channels, tiling) + d.lowpass + d.highpass;
    const double residual = relative_l2(recon, f);

    write_field_stack(d.channels, ctx.out_dir / "channels.f2d");
    write_field(d.lowpass, ctx.out_dir / "lowpass.f2d");
    write_field(d.highpass, ctx.out_dir / "highpass.f2d");

    json report;
    report["boxes"] = tiling.box_count();
    report["partition_max_error"] = pr.max_error_total;
    report["partition_max_error_inner"] = pr.max_error_inner;
    report["reconstruction_residual"] = residual;
    json boxes = json::array();
    for (const auto& b : tiling.boxes()) {
        boxes.push_back({{"scale", b.scale}, {"orientation", b.orientation}, {"wedges", b.wedge_count},
                         {"direction", {b.direction.x1, b.direction.x2}}});
    }
    report["box_list"] = std::move(boxes);
    report["warnings"] = tiling.warnings();
    write_json(report, ctx.out_dir / "decompose_report.json");

    Manifest m("decompose", ctx.config);
    for (const char* o : {"channels.f2d", "lowpass.f2d", "highpass.f2d", "decompose_report.json"}) m.add_output(o);
    m.add_metric("boxes", tiling.box_count());
    m.add_metric("partition_max_error", pr.max_error_total);
    m.add_metric("reconstruction_residual", residual);
    m.append_to(ctx.out_dir);

    log(ctx) << "decompose: " << tiling.box_count() << " boxes, partition error " << pr.max_error_total
             << ", reconstruction residual " << residual << '\n';
    return 0;
}

int cmd_raytrace(const CommandContext& ctx) {
    prepare(ctx);
    const WaveSpeed w = ctx.config.wavespeed.build();
    Rng rng = Rng(ctx.config.seed).split("raytrace");
    const auto rays = sample_rays(w, ctx.config.sim.T, ctx.config.fit.samples, rng, ctx.config.sim.ray_steps);
    double drift = 0.0;
    for (const auto& r : rays) {
        const double h0 = hamiltonian(w, r.start);
        drift = std::max(drift, std::abs(hamiltonian(w, r.end) - h0) / h0);
    }
    write_rays_csv(rays, ctx.out_dir / "rays.csv");

    Manifest m("raytrace", ctx.config);
    m.add_output("rays.csv");
    m.add_metric("rays", rays.size());
    m.add_metric("max_relative_hamiltonian_drift", drift);
    m.append_to(ctx.out_dir);
    log(ctx) << "raytrace: " << rays.size() << " rays, max relative Hamiltonian drift " << drift << '\n';
    return 0;
}

int cmd_fit_warp(const CommandContext& ctx, const fs::path& rays_path) {
    prepare(ctx);
    std::vector<RaySample> rays = read_rays_csv(rays_path);
    if (rays.empty()) throw InvalidArgument(rays_path.string() + " holds no rays");
    Rng rng = Rng(ctx.config.seed).split("fit-warp");
    for (std::size_t i = rays.size(); i > 1; --i) std::swap(rays[i - 1], rays[rng.next() % i]);
    const auto n_hold = static_cast<std::size_t>(std::floor(ctx.config.fit.holdout * static_cast<double>(rays.size())));
    const std::span<const RaySample> all(rays);
    const auto held = all.first(n_hold);
    const auto train = all.subspan(n_hold);

    const FittedWarp fit = fit_warp(train, ctx.config.fit.basis, ctx.config.fit.ridge);
    const double holdout_rmse =
        held.empty() ? std::numeric_limits<double>::quiet_NaN() : endpoint_rmse(fit, held);

    auto tiling = std::make_shared<const FrequencyTiling>(build_tiling(ctx.config.tiling));
    const FioPlan plan = fitted_plan(tiling, fit);
    save_plan(plan, ctx.out_dir / "warp_plan.toml");

    std::size_t caustics = 0;
    double det_min = std::numeric_limits<double>::infinity();
    for (const auto& t : plan.terms) {
        for (const auto& g : t.grids) {
            const JacobianReport jr = warp_jacobian(g);
            caustics += jr.caustic ? 1 : 0;
            det_min = std::min(det_min, jr.min);
        }
    }

    json report;
    report["train_samples"] = train.size();
    report["holdout_samples"] = held.size();
    report["train_rms"] = fit.training_rms();
    report["holdout_rmse"] = holdout_rmse;
    report["bin_counts"] = std::vector<std::size_t>(fit.bin_counts().begin(), fit.bin_counts().end());
    report["caustic_grids"] = caustics;
    report["min_jacobian"] = det_min;
    write_json(report, ctx.out_dir / "fit_report.json");

    Manifest m("fit-warp", ctx.config);
    m.add_output("warp_plan.toml");
    for (std::size_t b = 0; b < plan.terms.size(); ++b) {
        for (std::size_t r = 0; r < plan.terms[b].grids.size(); ++r) {
            m.add_output("warp_plan_grid_" + std::to_string(b) + "_" + std::to_string(r) + ".f2d");
        }
    }
    m.add_output("fit_report.json");
    m.add_metric("train_rms", fit.training_rms());
    m.add_metric("holdout_rmse", holdout_rmse);
    m.add_metric("caustic_grids", caustics);
    m.append_to(ctx.out_dir);
    log(ctx) << "fit-warp: train rms " << fit.training_rms() << ", holdout rmse " << holdout_rmse << ", "
             << caustics << " grids with caustics\n";
    return 0;
}

int cmd_rtc(const CommandContext& ctx, const fs::path& input) {
    prepare(ctx);
    const RunConfig& rc = ctx.config;
    const Field2D p0 = load_input(input, rc.tiling);
    const std::size_t m = p0.side();
    const WaveSpeed w = rc.wavespeed.build();
    const double T = rc.sim.T;
    const Field2D zero(m);
    auto tiling = std::make_shared<const FrequencyTiling>(build_tiling(rc.tiling));

    std::vector<std::string> outputs;
    auto propagate = [&](const Field2D& p, const std::string& tag) {
        if (T == 0.0) return p;
        if (w.is_constant()) return spectral_propagate(p, zero, w.c0(), T);
        SimConfig cfg = make_sim_config(m, w, T, rc.sim.cfl, rc.sim.boundary);
        cfg.snapshot_every = rc.sim.snapshot_every;
        const auto snap = [&](const WaveState& s) {
            char name[64];
            std::snprintf(name, sizeof name, "%s_snap_%06zu.f2d", tag.c_str(), s.step);
            write_field(s.p, ctx.out_dir / name);
            outputs.emplace_back(name);
        };
        return fdtd_propagate(p, zero, cfg, snap).p;
    };

    const Field2D forward = propagate(p0, "forward");
    const Field2D oracle = in_band(propagate(forward, "oracle"), *tiling);
    const FioPlan plan = w.is_constant() ? constant_speed_plan(tiling, w.c0(), T)
                                         : traced_plan(tiling, w, T, rc.sim.ray_steps);
    const Field2D recon = apply_fio(forward, plan);
    const double err = relative_l2(recon, oracle);
    const double err_p0 = relative_l2(recon, in_band(p0, *tiling));

    write_field(forward, ctx.out_dir / "forward.f2d");
    write_field(oracle, ctx.out_dir / "oracle.f2d");
    write_field(recon, ctx.out_dir / "fio_recon.f2d");

    json report;
    report["solver"] = T == 0.0 ? "none" : (w.is_constant() ? "spectral" : "fdtd");
    report["T"] = T;
    report["boxes"] = tiling->box_count();
    report["relative_error_vs_oracle"] = err;
    report["relative_error_vs_initial_in_band"] = err_p0;
    write_json(report, ctx.out_dir / "rtc_report.json");

    Manifest man("rtc", ctx.config);
    for (const char* o : {"forward.f2d", "oracle.f2d", "fio_recon.f2d", "rtc_report.json"}) man.add_output(o);
    for (const auto& o : outputs) man.add_output(o);
    man.add_metric("relative_error_vs_oracle", err);
    man.add_metric("relative_error_vs_initial_in_band", err_p0);
    man.append_to(ctx.out_dir);
    log(ctx) << "rtc: relative error vs oracle " << err << ", vs initial in-band " << err_p0 << '\n';
    return 0;
}

int cmd_metric_sweep(const CommandContext& ctx, const fs::path& input) {
    prepare(ctx);
    const Field2D f = read_field(input);
    const auto rows = metric_sweep(f, ctx.config.sinkhorn.shifts, ctx.config.sinkhorn.options);
    {
        std::ofstream os(ctx.out_dir / "metrics.csv", std::ios::trunc);
        if (!os) throw Error("cannot write " + (ctx.out_dir / "metrics.csv").string());
        write_metric_csv(os, rows);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].delta > rows[i - 1].delta && rows[i].w2_divergence < rows[i - 1].w2_divergence) monotone = false;
    }
    Manifest m("metric-sweep", ctx.config);
    m.add_output("metrics.csv");
    m.add_metric("rows", rows.size());
    m.add_metric("divergence_monotone", monotone);
    m.append_to(ctx.out_dir);
    log(ctx) << "metric-sweep: " << rows.size() << " rows, divergence "
             << (monotone ? "monotone" : "not monotone") << " over increasing shifts\n";
    return 0;
}

int cmd_polyphase_check(const CommandContext& ctx, int kernel_side, int levels) {
    prepare(ctx);
    if (kernel_side < 1 || kernel_side % 2 == 0) throw InvalidArgument("K must be a positive odd integer");
    constexpr std::size_t kImage = 64;
    Rng rng = Rng(ctx.config.seed).split("polyphase-check");
    const auto k = static_cast<std::size_t>(kernel_side);
    Array2D<double> taps(k, k);
    for (auto& v : taps.values()) v = rng.normal();
    Array2D<double> x(kImage, kImage);
    for (auto& v : x.values()) v = rng.normal();
    const Filter2D h(std::move(taps));
    const Field2D xf(std::move(x));

    PolyphaseStats stats;
    const Field2D direct = convolve_periodic(xf, h);
    const Field2D net = polyphase_apply(xf, h, levels, &stats);
    const double err = (net - direct).max_abs();
    const bool pass = err < 1e-10;

    char line[128];
    std::snprintf(line, sizeof line, "%s max_err<1e-10 value=%.3e", pass ? "PASS" : "FAIL", err);
    std::printf("%s\n", line);
    std::fflush(stdout);

    json report;
    report["K"] = kernel_side;
    report["levels"] = levels;
    report["image_side"] = kImage;
    report["max_error"] = err;
    report["pass"] = pass;
    report["innermost_channels"] = stats.innermost_channels;
    report["innermost_filter_side"] = stats.max_filter_side;
    report["innermost_image_side"] = stats.innermost_image_side;
    write_json(report, ctx.out_dir / "polyphase_report.json");

    Manifest m("polyphase-check", ctx.config);
    m.add_output("polyphase_report.json");
    m.add_metric("max_error", err);
    m.add_metric("pass", pass);
    m.append_to(ctx.out_dir);
    return pass ? 0 : 1;
}

}  // namespace wavefio::cli
