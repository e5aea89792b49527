#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "wavefio/config.hpp"
#include "wavefio/error.hpp"

namespace wavefio::cli {

namespace {

template <typename Fn>
void for_keys(const ConfigSection& s, const std::string& section, Fn&& fn) {
    for (const auto& [key, value] : s) {
        if (!fn(key, value)) throw InvalidArgument("unknown key " + section + "." + key);
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "sponge"; }

}  // namespace

WaveSpeed WaveSpeedSettings::build() const {
    if (kind == "constant") return WaveSpeed::constant(c0);
    if (kind == "gaussian") return WaveSpeed::gaussian(z1, z2, z3, amplitude, baseline);
    throw InvalidArgument("wavespeed.kind must be \"constant\" or \"gaussian\"");
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << to_config_block(tiling) << '\n';
    os << "[wavespeed]\nkind = \"" << wavespeed.kind << "\"\nc0 = " << format_number(wavespeed.c0)
       << "\nz1 = " << format_number(wavespeed.z1) << "\nz2 = " << format_number(wavespeed.z2)
       << "\nz3 = " << format_number(wavespeed.z3) << "\namplitude = " << format_number(wavespeed.amplitude)
       << "\nbaseline = " << format_number(wavespeed.baseline) << "\n\n";
    os << "[sim]\nT = " << format_number(sim.T) << "\ncfl = " << format_number(sim.cfl) << "\nboundary = \""
       << boundary_name(sim.boundary) << "\"\nsnapshot_every = " << sim.snapshot_every
       << "\nray_steps = " << sim.ray_steps << "\n\n";
    os << "[sinkhorn]\nepsilon = " << format_number(sinkhorn.options.epsilon)
       << "\nmax_iter = " << sinkhorn.options.max_iter << "\ntol = " << format_number(sinkhorn.options.tol)
       << "\nepsilon_scaling = " << (sinkhorn.options.epsilon_scaling ? "true" : "false") << "\nshifts = [";
    for (std::size_t i = 0; i < sinkhorn.shifts.size(); ++i) os << (i ? ", " : "") << sinkhorn.shifts[i];
    os << "]\n\n";
    os << "[fit]\nsamples = " << fit.samples << "\nholdout = " << format_number(fit.holdout) << "\nbasis = \""
       << (fit.basis.kind == WarpBasis::Kind::Rbf ? "rbf" : "polynomial") << "\"\ndegree = " << fit.basis.degree
       << "\nrbf_centers = " << fit.basis.rbf_centers << "\norientation_bins = " << fit.basis.orientation_bins
       << "\nridge = " << format_number(fit.ridge) << "\n\n";
    os << "[run]\nseed = " << seed << '\n';
    return os.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

RunConfig parse_run_config(std::string_view text) {
    const ConfigDocument doc = ConfigDocument::parse(text);
    RunConfig rc;
    for (const auto& [name, section] : doc.sections()) {
        if (name == "tiling") {
            rc.tiling = parse_tiling_section(section);
        } else if (name == "wavespeed") {
            auto& w = rc.wavespeed;
            for_keys(section, name, [&](const std::string& k, const ConfigValue& v) {
                if (k == "kind") w.kind = v.as_string("wavespeed.kind");
                else if (k == "c0") w.c0 = v.as_number("wavespeed.c0");
                else if (k == "z1") w.z1 = v.as_number("wavespeed.z1");
                else if (k == "z2") w.z2 = v.as_number("wavespeed.z2");
                else if (k == "z3") w.z3 = v.as_number("wavespeed.z3");
                else if (k == "amplitude") w.amplitude = v.as_number("wavespeed.amplitude");
                else if (k == "baseline") w.baseline = v.as_number("wavespeed.baseline");
                else return false;
                return true;
            });
        } else if (name == "sim") {
            auto& s = rc.sim;
            for_keys(section, name, [&](const std::string& k, const ConfigValue& v) {
                if (k == "T") {
                    s.T = v.as_number("sim.T");
                } else if (k == "cfl") {
                    s.cfl = v.as_number("sim.cfl");
                } else if (k == "boundary") {
                    const auto& b = v.as_string("sim.boundary");
                    require(b == "periodic" || b == "sponge", "sim.boundary must be \"periodic\" or \"sponge\"");
                    s.boundary = b == "periodic" ? Boundary::Periodic : Boundary::Sponge;
                } else if (k == "snapshot_every") {
                    const long n = v.as_integer("sim.snapshot_every");
                    require(n >= 0, "sim.snapshot_every must be nonnegative");
                    s.snapshot_every = static_cast<std::size_t>(n);
                } else if (k == "ray_steps") {
                    s.ray_steps = static_cast<int>(v.as_integer("sim.ray_steps"));
                } else {
                    return false;
                }
                return true;
            });
        } else if (name == "sinkhorn") {
            auto& s = rc.sinkhorn;
            for_keys(section, name, [&](const std::string& k, const ConfigValue& v) {
                if (k == "epsilon") {
                    s.options.epsilon = v.as_number("sinkhorn.epsilon");
                } else if (k == "max_iter") {
                    s.options.max_iter = static_cast<int>(v.as_integer("sinkhorn.max_iter"));
                } else if (k == "tol") {
                    s.options.tol = v.as_number("sinkhorn.tol");
                } else if (k == "epsilon_scaling") {
                    s.options.epsilon_scaling = v.as_bool("sinkhorn.epsilon_scaling");
                } else if (k == "shifts") {
                    s.shifts.clear();
                    for (long d : v.as_integers("sinkhorn.shifts")) s.shifts.push_back(static_cast<int>(d));
                } else {
                    return false;
                }
                return true;
            });
        } else if (name == "fit") {
            auto& f = rc.fit;
            for_keys(section, name, [&](const std::string& k, const ConfigValue& v) {
                if (k == "samples") {
                    const long n = v.as_integer("fit.samples");
                    require(n > 0, "fit.samples must be positive");
                    f.samples = static_cast<std::size_t>(n);
                } else if (k == "holdout") {
                    f.holdout = v.as_number("fit.holdout");
                } else if (k == "basis") {
                    const auto& b = v.as_string("fit.basis");
                    require(b == "rbf" || b == "polynomial", "fit.basis must be \"rbf\" or \"polynomial\"");
                    f.basis.kind = b == "rbf" ? WarpBasis::Kind::Rbf : WarpBasis::Kind::Polynomial;
                } else if (k == "degree") {
                    f.basis.degree = static_cast<int>(v.as_integer("fit.degree"));
                } else if (k == "rbf_centers") {
                    f.basis.rbf_centers = static_cast<int>(v.as_integer("fit.rbf_centers"));
                } else if (k == "orientation_bins") {
                    f.basis.orientation_bins = static_cast<int>(v.as_integer("fit.orientation_bins"));
                } else if (k == "ridge") {
                    f.ridge = v.as_number("fit.ridge");
                } else {
                    return false;
                }
                return true;
            });
        } else if (name == "run") {
            for_keys(section, name, [&](const std::string& k, const ConfigValue& v) {
                if (k != "seed") return false;
                const long s = v.as_integer("run.seed");
                require(s >= 0, "run.seed must be nonnegative");
                rc.seed = static_cast<std::uint64_t>(s);
                return true;
            });
        } else {
            throw InvalidArgument("unknown section [" + name + "]");
        }
    }

    (void)rc.wavespeed.build();
    require(std::isfinite(rc.sim.T) && rc.sim.T >= 0.0, "sim.T must be finite and nonnegative");
    require(rc.sim.cfl > 0.0 && rc.sim.cfl <= 0.5, "sim.cfl must lie in (0, 0.5]");
    require(rc.sim.ray_steps >= 16, "sim.ray_steps must be at least 16");
    require(rc.sinkhorn.options.epsilon > 0.0, "sinkhorn.epsilon must be positive");
    require(rc.sinkhorn.options.max_iter >= 1, "sinkhorn.max_iter must be at least 1");
    require(rc.sinkhorn.options.tol > 0.0, "sinkhorn.tol must be positive");
    require(!rc.sinkhorn.shifts.empty(), "sinkhorn.shifts must not be empty");
    require(rc.fit.holdout >= 0.0 && rc.fit.holdout < 1.0, "fit.holdout must lie in [0, 1)");
    require(rc.fit.basis.degree >= 1 && rc.fit.basis.degree <= 6, "fit.degree must lie in [1, 6]");
    require(rc.fit.basis.rbf_centers >= 2, "fit.rbf_centers must be at least 2");
    require(rc.fit.basis.orientation_bins >= 1, "fit.orientation_bins must be positive");
    require(rc.fit.ridge >= 0.0 && std::isfinite(rc.fit.ridge), "fit.ridge must be finite and nonnegative");
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace wavefio::cli
