#include "wavefio/tiling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wavefio/error.hpp"
#include "wavefio/fft.hpp"

namespace wavefio {

namespace {

constexpr double kPi = std::numbers::pi;

// Meyer auxiliary polynomial: 0 at 0, 1 at 1, flat to third order at both ends.
double meyer(double t) noexcept {
    return t * t * t * t * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double smooth_step_complement(double x) noexcept {
    if (x <= -1.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double c = std::cos(0.5 * kPi * meyer(0.5 * (x + 1.0)));
    return c * c;
}

// Wrap into [-n/2, n/2).
double wrap_wedges(double d, int n) noexcept {
    const double half = 0.5 * n;
    d = std::fmod(d + half, static_cast<double>(n));
    if (d < 0.0) d += n;
    return d - half;
}

void validate(const TilingConfig& c) {
    if (!is_valid_side(c.side)) {
        throw InvalidArgument("tiling side must be a power of two >= 8");
    }
    if (c.k_min < 0 || c.k_max < c.k_min) {
        throw InvalidArgument("tiling needs 0 <= k_min <= k_max");
    }
    if (std::ldexp(1.0, c.k_max) >= 0.5 * static_cast<double>(c.side)) {
        throw InvalidArgument("Nyquist violation: 2^k_max = " + std::to_string(1L << c.k_max) +
                              " must be below M/2 = " + std::to_string(c.side / 2));
    }
    if (c.wedges.size() != static_cast<std::size_t>(c.k_max - c.k_min + 1)) {
        throw InvalidArgument("tiling needs one wedge count per scale (" +
                              std::to_string(c.k_max - c.k_min + 1) + "), got " +
                              std::to_string(c.wedges.size()));
    }
    for (int n : c.wedges) {
        if (n < 1 || (n != 1 && n % 2 != 0)) {
            throw InvalidArgument("wedge count must be even (or 1), got " + std::to_string(n));
        }
    }
    if (!(c.beta > 0.0 && c.beta < 1.0)) {
        throw InvalidArgument("tiling beta must lie in (0, 1)");
    }
}

// Angular window of full-circle wedge j out of n at polar angle theta.
double wedge_weight(double theta, int j, int n, double beta) noexcept {
    if (n == 1) return 1.0;
    const double width = 2.0 * kPi / n;
    const double d = wrap_wedges(theta / width - j, n);
    const double half = 0.5 * beta;
    return smooth_step((d + 0.5) / half) * smooth_step_complement((d - 0.5) / half);
}

Array2D<double> symmetrize(const Array2D<double>& w) {
    const std::size_t m = w.rows();
    Array2D<double> out(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t ni = negated_index(i, m);
        for (std::size_t j = 0; j < m; ++j) {
            out(i, j) = 0.5 * (w(i, j) + w(ni, negated_index(j, m)));
        }
    }
    return out;
}

template <typename F>
Array2D<double> sample(std::size_t m, F&& weight) {
    Array2D<double> w(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const Vec2 xi{static_cast<double>(frequency_of_index(i, m)),
                          static_cast<double>(frequency_of_index(j, m))};
            w(i, j) = weight(xi);
        }
    }
    return symmetrize(w);
}

Field2D apply_window(const Spectrum2D& x, const Array2D<double>& w) {
    Spectrum2D y(x.side());
    auto src = x.array().values();
    auto dst = y.array().values();
    auto wv = w.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] * wv[k];
    return ifft2(y);
}

}  // namespace

double smooth_step(double x) noexcept {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double s = std::sin(0.5 * kPi * meyer(0.5 * (x + 1.0)));
    return s * s;
}

FrequencyTiling FrequencyTiling::build(const TilingConfig& config) {
    validate(config);
    FrequencyTiling t;
    t.config_ = config;
    const double beta = config.beta;

    for (int k = config.k_min; k <= config.k_max; ++k) {
        const int n = config.wedges[static_cast<std::size_t>(k - config.k_min)];
        const int pairs = n == 1 ? 1 : n / 2;
        for (int j = 0; j < pairs; ++j) {
            BoxSpec b;
            b.scale = k;
            b.orientation = j;
            b.wedge_count = n;
            b.direction = direction(2.0 * kPi * j / n);
            b.r_lo = std::exp2(k - 0.5 * beta);
            b.r_hi = std::exp2(k + 1 + 0.5 * beta);
            b.angular_half_width = n == 1 ? kPi : (kPi / n) * (1.0 + beta);
            t.boxes_.push_back(b);
        }
    }

    // Parabolic scaling: half-width * 2^{k/2} should stay roughly constant.
    const double ref = t.boxes_.front().angular_half_width * std::exp2(0.5 * config.k_min);
    for (int k = config.k_min; k <= config.k_max; ++k) {
        const int n = config.wedges[static_cast<std::size_t>(k - config.k_min)];
        const double hw = n == 1 ? kPi : (kPi / n) * (1.0 + beta);
        const double ratio = hw * std::exp2(0.5 * k) / ref;
        if (ratio < 0.5 || ratio > 2.0) {
            std::ostringstream os;
            os << "scale " << k << " with " << n
               << " wedges departs from parabolic scaling (ratio " << ratio << ")";
            t.warnings_.push_back(os.str());
        }
    }

    const std::size_t m = config.side;
    t.windows_.reserve(t.boxes_.size());
    for (std::size_t b = 0; b < t.boxes_.size(); ++b) {
        t.windows_.push_back(sample(m, [&](const Vec2& xi) { return t.box_weight(b, xi); }));
    }
    t.lowpass_ = sample(m, [&](const Vec2& xi) { return t.lowpass_weight(xi); });
    t.highpass_ = sample(m, [&](const Vec2& xi) { return t.highpass_weight(xi); });
    return t;
}

double FrequencyTiling::r_min() const noexcept { return std::exp2(config_.k_min - 0.5 * config_.beta); }
double FrequencyTiling::r_max() const noexcept { return std::exp2(config_.k_max + 1 + 0.5 * config_.beta); }
double FrequencyTiling::r_inner_min() const noexcept { return std::exp2(config_.k_min + 0.5 * config_.beta); }
double FrequencyTiling::r_inner_max() const noexcept { return std::exp2(config_.k_max + 1 - 0.5 * config_.beta); }

double FrequencyTiling::box_weight(std::size_t box, const Vec2& xi) const {
    const BoxSpec& b = boxes_.at(box);
    const double r = norm(xi);
    if (r == 0.0) return 0.0;
    const double s = std::log2(r);
    const double half = 0.5 * config_.beta;
    const double radial =
        smooth_step((s - b.scale) / half) * smooth_step_complement((s - (b.scale + 1)) / half);
    if (radial == 0.0) return 0.0;
    const double theta = std::atan2(xi.x2, xi.x1);
    const int n = b.wedge_count;
    double angular = wedge_weight(theta, b.orientation, n, config_.beta);
    if (n > 1) angular += wedge_weight(theta, b.orientation + n / 2, n, config_.beta);
    return radial * angular;
}

double FrequencyTiling::lowpass_weight(const Vec2& xi) const {
    const double r = norm(xi);
    if (r == 0.0) return 1.0;
    return smooth_step_complement((std::log2(r) - config_.k_min) / (0.5 * config_.beta));
}

double FrequencyTiling::highpass_weight(const Vec2& xi) const {
    const double r = norm(xi);
    if (r == 0.0) return 0.0;
    return smooth_step((std::log2(r) - (config_.k_max + 1)) / (0.5 * config_.beta));
}

Decomposition analyze(const Field2D& f, const FrequencyTiling& tiling) {
    if (f.side() != tiling.side()) {
        throw SizeMismatch("field side " + std::to_string(f.side()) + " does not match tiling side " +
                           std::to_string(tiling.side()));
    }
    const Spectrum2D x = fft2(f);
    std::vector<Field2D> channels;
    channels.reserve(tiling.box_count());
    for (std::size_t b = 0; b < tiling.box_count(); ++b) {
        channels.push_back(apply_window(x, tiling.window(b)));
    }
    return {std::move(channels), apply_window(x, tiling.lowpass_window()),
            apply_window(x, tiling.highpass_window())};
}

Field2D synthesize(std::span<const Field2D> channels, const FrequencyTiling& tiling) {
    if (channels.size() != tiling.box_count()) {
        throw SizeMismatch("expected " + std::to_string(tiling.box_count()) + " channels, got " +
                           std::to_string(channels.size()));
    }
    const std::size_t m = tiling.side();
    Array2D<double> sum(m, m, 0.0);
    for (const auto& c : channels) {
        if (c.side() != m) throw SizeMismatch("channel side does not match tiling");
        auto s = sum.values();
        auto v = c.values();
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += v[k];
    }
    return Field2D(std::move(sum));
}

Field2D in_band(const Field2D& f, const FrequencyTiling& tiling) {
    if (f.side() != tiling.side()) throw SizeMismatch("field side does not match tiling");
    const std::size_t m = tiling.side();
    Array2D<double> w(m, m, 0.0);
    for (std::size_t b = 0; b < tiling.box_count(); ++b) {
        auto dst = w.values();
        auto src = tiling.window(b).values();
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
    return apply_window(fft2(f), w);
}

PartitionReport check_partition(const FrequencyTiling& tiling) {
    const std::size_t m = tiling.side();
    PartitionReport rep;
    const double lo = tiling.r_inner_min();
    const double hi = tiling.r_inner_max();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double directional = 0.0;
            for (std::size_t b = 0; b < tiling.box_count(); ++b) directional += tiling.window(b)(i, j);
            const double total =
                directional + tiling.lowpass_window()(i, j) + tiling.highpass_window()(i, j);
            rep.max_error_total = std::max(rep.max_error_total, std::abs(total - 1.0));
            const double r = std::hypot(static_cast<double>(frequency_of_index(i, m)),
                                        static_cast<double>(frequency_of_index(j, m)));
            if (r >= lo && r <= hi) {
                ++rep.inner_points;
                rep.max_error_inner = std::max(rep.max_error_inner, std::abs(directional - 1.0));
            }
        }
    }
    return rep;
}

std::string to_config_block(const TilingConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "[tiling]\n";
    os << "side = " << c.side << '\n';
    os << "k_min = " << c.k_min << '\n';
    os << "k_max = " << c.k_max << '\n';
    os << "wedges = [";
    for (std::size_t i = 0; i < c.wedges.size(); ++i) os << (i ? ", " : "") << c.wedges[i];
    os << "]\n";
    os << "beta = " << c.beta << '\n';
    return os.str();
}

}  // namespace wavefio

namespace wavefio {

TilingConfig parse_tiling_section(const ConfigSection& section) {
    TilingConfig c;
    for (const auto& [key, v] : section) {
        if (key == "side") {
            const long s = v.as_integer("tiling.side");
            if (s <= 0) throw InvalidArgument("tiling.side must be positive");
            c.side = static_cast<std::size_t>(s);
        } else if (key == "k_min") {
            c.k_min = static_cast<int>(v.as_integer("tiling.k_min"));
        } else if (key == "k_max") {
            c.k_max = static_cast<int>(v.as_integer("tiling.k_max"));
        } else if (key == "wedges") {
            c.wedges.clear();
            for (long n : v.as_integers("tiling.wedges")) c.wedges.push_back(static_cast<int>(n));
        } else if (key == "beta") {
            c.beta = v.as_number("tiling.beta");
        } else {
            throw InvalidArgument("unknown key tiling." + key);
        }
    }
    validate(c);
    return c;
}

}  // namespace wavefio
