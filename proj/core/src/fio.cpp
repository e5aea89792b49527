#include "wavefio/fio.hpp"

#include <cmath>
#include <fstream>
#include <utility>
#include <sstream>
#include <string>

#include "wavefio/config.hpp"
#include "wavefio/error.hpp"
#include "wavefio/field_io.hpp"

namespace wavefio {

namespace {

void accumulate(Array2D<double>& acc, double w, const Field2D& f) {
    auto dst = acc.values();
    auto src = f.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k];
}

// Every factory below satisfies grid(nu, Minus) == grid(-nu, Plus), and
// scales share directions, so grids are built once per momentum direction.
FioPlan two_branch_plan(std::shared_ptr<const FrequencyTiling> tiling,
                        const std::function<WarpedGrid(const Vec2&)>& make_plus_grid) {
    FioPlan plan;
    plan.tiling = std::move(tiling);
    std::vector<std::pair<Vec2, WarpedGrid>> cache;
    auto lookup = [&](const Vec2& d) -> const WarpedGrid& {
        for (const auto& [key, grid] : cache) {
            if (std::abs(key.x1 - d.x1) < 1e-12 && std::abs(key.x2 - d.x2) < 1e-12) return grid;
        }
        cache.emplace_back(d, make_plus_grid(d));
        return cache.back().second;
    };
    for (const BoxSpec& b : plan.tiling->boxes()) {
        FioTerm term;
        for (Branch br : {Branch::Plus, Branch::Minus}) {
            WarpedGrid g = lookup(br == Branch::Plus ? b.direction : -1.0 * b.direction);
            g.orientation = b.direction;
            g.branch = br;
            term.grids.push_back(std::move(g));
            term.amplitudes.push_back(0.5);
        }
        plan.terms.push_back(std::move(term));
    }
    return plan;
}

}  // namespace

Field2D resample(const Field2D& f, const WarpedGrid& g) {
    const std::size_t m = f.side();
    if (g.side() != m || g.points.cols() != m) {
        throw SizeMismatch("warped grid side " + std::to_string(g.side()) + " does not match field side " +
                           std::to_string(m));
    }
    const double md = static_cast<double>(m);
    const double top = md - 1.0;
    Array2D<double> out(m, m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const Vec2 p = g.points(i, j);
            const double u = p.x1 * md;
            const double v = p.x2 * md;
            if (!(u >= 0.0 && u <= top && v >= 0.0 && v <= top)) continue;
            const auto i0 = std::min(static_cast<std::size_t>(u), m - 2);
            const auto j0 = std::min(static_cast<std::size_t>(v), m - 2);
            const double fu = u - static_cast<double>(i0);
            const double fv = v - static_cast<double>(j0);
            out(i, j) = (1.0 - fu) * (1.0 - fv) * f(i0, j0) + fu * (1.0 - fv) * f(i0 + 1, j0) +
                        (1.0 - fu) * fv * f(i0, j0 + 1) + fu * fv * f(i0 + 1, j0 + 1);
        }
    }
    return Field2D(std::move(out));
}

void FioPlan::validate() const {
    if (!tiling) throw InvalidArgument("plan has no tiling");
    if (terms.size() != tiling->box_count()) {
        throw SizeMismatch("plan has " + std::to_string(terms.size()) + " terms for " +
                           std::to_string(tiling->box_count()) + " boxes");
    }
    for (const auto& t : terms) {
        if (t.grids.size() != t.amplitudes.size()) {
            throw SizeMismatch("plan term needs one amplitude per grid");
        }
        for (const auto& g : t.grids) {
            if (g.side() != tiling->side() || g.points.cols() != tiling->side()) {
                throw SizeMismatch("plan grid side does not match tiling side");
            }
        }
        for (double a : t.amplitudes) {
            if (!std::isfinite(a)) throw InvalidArgument("plan amplitudes must be finite");
        }
    }
}

FioPlan identity_plan(std::shared_ptr<const FrequencyTiling> tiling) {
    FioPlan plan;
    plan.tiling = std::move(tiling);
    for (const BoxSpec& b : plan.tiling->boxes()) {
        plan.terms.push_back({{identity_grid(plan.tiling->side(), b.direction)}, {1.0}, std::nullopt});
    }
    return plan;
}

FioPlan constant_speed_plan(std::shared_ptr<const FrequencyTiling> tiling, double c0, double t) {
    const std::size_t m = tiling->side();
    return two_branch_plan(std::move(tiling), [&](const Vec2& nu) {
        return constant_speed_warp(nu, t, c0, Branch::Plus, m);
    });
}

FioPlan traced_plan(std::shared_ptr<const FrequencyTiling> tiling, const WaveSpeed& w, double T, int steps) {
    const std::size_t m = tiling->side();
    return two_branch_plan(std::move(tiling), [&](const Vec2& nu) {
        return trace_warped_grid(nu, w, T, Branch::Plus, m, steps);
    });
}

FioPlan fitted_plan(std::shared_ptr<const FrequencyTiling> tiling, const FittedWarp& fit) {
    const std::size_t m = tiling->side();
    return two_branch_plan(std::move(tiling), [&](const Vec2& nu) {
        return fitted_warped_grid(fit, nu, Branch::Plus, m);
    });
}

Field2D apply_fio(const Field2D& u, const FioPlan& plan) {
    plan.validate();
    const Decomposition d = analyze(u, *plan.tiling);
    const std::size_t m = u.side();
    Array2D<double> acc(m, m, 0.0);
    for (std::size_t b = 0; b < plan.terms.size(); ++b) {
        const FioTerm& term = plan.terms[b];
        const Field2D channel = term.kernel ? convolve_periodic(d.channels[b], *term.kernel) : d.channels[b];
        for (std::size_t r = 0; r < term.grids.size(); ++r) {
            if (term.amplitudes[r] == 0.0) continue;
            accumulate(acc, term.amplitudes[r], resample(channel, term.grids[r]));
        }
    }
    if (plan.residuals == ResidualMode::PassThrough) {
        accumulate(acc, 1.0, d.lowpass);
        accumulate(acc, 1.0, d.highpass);
    }
    return Field2D(std::move(acc));
}

Field2D channel_shift_demo(const Field2D& u, const FrequencyTiling& tiling, std::span<const Vec2> shifts) {
    if (shifts.size() != tiling.box_count()) {
        throw SizeMismatch("channel_shift_demo needs one shift per box");
    }
    const Decomposition d = analyze(u, tiling);
    const std::size_t m = u.side();
    Array2D<double> acc(m, m, 0.0);
    for (std::size_t b = 0; b < shifts.size(); ++b) {
        WarpedGrid g = identity_grid(m, tiling.boxes()[b].direction);
        for (auto& p : g.points.values()) p += shifts[b];
        accumulate(acc, 1.0, resample(d.channels[b], g));
    }
    return Field2D(std::move(acc));
}

void save_plan(const FioPlan& plan, const std::filesystem::path& index_path) {
    plan.validate();
    const auto dir = index_path.parent_path();
    const std::string stem = index_path.stem().string();
    std::ostringstream idx;
    idx.precision(17);
    idx << to_config_block(plan.tiling->config()) << '\n';
    idx << "[plan]\n";
    idx << "residuals = \"" << (plan.residuals == ResidualMode::Drop ? "drop" : "pass") << "\"\n";
    std::ostringstream branches, amplitudes, grids, signs, kernels;
    for (std::size_t b = 0; b < plan.terms.size(); ++b) {
        const FioTerm& t = plan.terms[b];
        branches << (b ? ", " : "") << t.grids.size();
        std::string kname;
        if (t.kernel) {
            kname = stem + "_kernel_" + std::to_string(b) + ".f2d";
            std::ofstream os(dir / kname, std::ios::binary | std::ios::trunc);
            if (!os) throw Error("cannot write " + (dir / kname).string());
            write_f2d(os, t.kernel->taps());
        }
        kernels << (b ? ", " : "") << '"' << kname << '"';
        for (std::size_t r = 0; r < t.grids.size(); ++r) {
            const bool first = b == 0 && r == 0;
            const std::string gname = stem + "_grid_" + std::to_string(b) + "_" + std::to_string(r) + ".f2d";
            write_warped_grid(t.grids[r], dir / gname);
            amplitudes << (first ? "" : ", ") << t.amplitudes[r];
            grids << (first ? "" : ", ") << '"' << gname << '"';
            signs << (first ? "" : ", ") << '"' << (t.grids[r].branch == Branch::Plus ? "plus" : "minus") << '"';
        }
    }
    idx << "branches = [" << branches.str() << "]\n";
    idx << "amplitudes = [" << amplitudes.str() << "]\n";
    idx << "grids = [" << grids.str() << "]\n";
    idx << "branch_signs = [" << signs.str() << "]\n";
    idx << "kernels = [" << kernels.str() << "]\n";
    std::ofstream os(index_path, std::ios::trunc);
    if (!os) throw Error("cannot write " + index_path.string());
    os << idx.str();
}

FioPlan load_plan(const std::filesystem::path& index_path) {
    const auto doc = ConfigDocument::load(index_path.string());
    const auto* tiling_sec = doc.section("tiling");
    const auto* plan_sec = doc.section("plan");
    if (!tiling_sec || !plan_sec) throw FormatError("plan index needs [tiling] and [plan] sections");
    auto need = [&](const char* key) -> const ConfigValue& {
        auto it = plan_sec->find(key);
        if (it == plan_sec->end()) throw FormatError(std::string("plan index is missing plan.") + key);
        return it->second;
    };
    for (const auto& [key, v] : *plan_sec) {
        if (key != "residuals" && key != "branches" && key != "amplitudes" && key != "grids" &&
            key != "branch_signs" && key != "kernels") {
            throw FormatError("unknown key plan." + key);
        }
    }
    FioPlan plan;
    plan.tiling = std::make_shared<const FrequencyTiling>(build_tiling(parse_tiling_section(*tiling_sec)));
    const std::string& res = need("residuals").as_string("plan.residuals");
    if (res == "drop") {
        plan.residuals = ResidualMode::Drop;
    } else if (res == "pass") {
        plan.residuals = ResidualMode::PassThrough;
    } else {
        throw FormatError("plan.residuals must be \"drop\" or \"pass\"");
    }
    const auto branches = need("branches").as_integers("plan.branches");
    const auto amps = need("amplitudes").as_numbers("plan.amplitudes");
    const auto grids = need("grids").as_strings("plan.grids");
    const auto signs = need("branch_signs").as_strings("plan.branch_signs");
    const auto kernels = need("kernels").as_strings("plan.kernels");
    if (branches.size() != plan.tiling->box_count() || kernels.size() != branches.size()) {
        throw FormatError("plan index does not match the tiling box count");
    }
    const auto dir = index_path.parent_path();
    std::size_t k = 0;
    for (std::size_t b = 0; b < branches.size(); ++b) {
        FioTerm term;
        for (long r = 0; r < branches[b]; ++r, ++k) {
            if (k >= grids.size() || k >= amps.size() || k >= signs.size()) {
                throw FormatError("plan index lists too few grids");
            }
            const Branch br = signs[k] == "minus" ? Branch::Minus : Branch::Plus;
            term.grids.push_back(read_warped_grid(dir / grids[k], plan.tiling->boxes()[b].direction, br));
            term.amplitudes.push_back(amps[k]);
        }
        if (!kernels[b].empty()) {
            std::ifstream is(dir / kernels[b], std::ios::binary);
            if (!is) throw Error("cannot open " + (dir / kernels[b]).string());
            term.kernel = Filter2D(read_f2d(is));
        }
        plan.terms.push_back(std::move(term));
    }
    if (k != grids.size()) throw FormatError("plan index lists too many grids");
    plan.validate();
    return plan;
}

}  // namespace wavefio
