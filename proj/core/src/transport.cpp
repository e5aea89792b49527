#include "wavefio/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "wavefio/error.hpp"

namespace wavefio {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// out(i, j) = -eps * log sum_{k,l} exp(h(k, l) - ((i-k)^2 + (j-l)^2) / (n^2 eps)).
class LogKernel {
public:
    LogKernel(std::size_t n, double eps) : n_(n), eps_(eps), cost_(n), tmp_(n, n), col_(n) {
        const double s = 1.0 / (static_cast<double>(n) * static_cast<double>(n) * eps);
        for (std::size_t d = 0; d < n; ++d) cost_[d] = static_cast<double>(d * d) * s;
    }

    void apply(const Array2D<double>& h, Array2D<double>& out) {
        for (std::size_t k = 0; k < n_; ++k) {
            const double* row = &h(k, 0);
            for (std::size_t j = 0; j < n_; ++j) tmp_(k, j) = lse(row, 1, j);
        }
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t k = 0; k < n_; ++k) col_[k] = tmp_(k, j);
            for (std::size_t i = 0; i < n_; ++i) out(i, j) = -eps_ * lse(col_.data(), 1, i);
        }
    }

private:
    double lse(const double* v, std::size_t stride, std::size_t at) const {
        double mx = kNegInf;
        for (std::size_t l = 0; l < n_; ++l) {
            const double d = v[l * stride] - cost_[at > l ? at - l : l - at];
            mx = std::max(mx, d);
        }
        if (mx == kNegInf) return kNegInf;
        double s = 0.0;
        for (std::size_t l = 0; l < n_; ++l) {
            s += std::exp(v[l * stride] - cost_[at > l ? at - l : l - at] - mx);
        }
        return mx + std::log(s);
    }

    std::size_t n_;
    double eps_;
    std::vector<double> cost_;
    Array2D<double> tmp_;
    std::vector<double> col_;
};

Array2D<double> log_weights(const DiscreteMeasure& m) {
    Array2D<double> out(m.side(), m.side());
    auto dst = out.values();
    auto src = m.weights().values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[k] > 0.0 ? std::log(src[k]) : kNegInf;
    return out;
}

// h = g / eps + log b
void fill_exponent(Array2D<double>& h, const Array2D<double>& pot, const Array2D<double>& logw, double eps) {
    auto dst = h.values();
    auto p = pot.values();
    auto lw = logw.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = p[k] / eps + lw[k];
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Array2D<double> weights) : w_(std::move(weights)) {
    if (w_.empty() || w_.rows() != w_.cols()) {
        throw InvalidArgument("measure weights must be a nonempty square array");
    }
    double sum = 0.0;
    for (double v : w_.values()) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("measure weights must be finite and nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidArgument("measure weights sum to " + std::to_string(sum) + ", not 1");
    }
}

DiscreteMeasure DiscreteMeasure::dirac(std::size_t n, std::size_t i, std::size_t j) {
    if (i >= n || j >= n) throw InvalidArgument("dirac location outside the grid");
    Array2D<double> w(n, n, 0.0);
    w(i, j) = 1.0;
    return DiscreteMeasure(std::move(w));
}

DiscreteMeasure to_measure(const Field2D& f) {
    const double total = f.norm1();
    if (!(total > 0.0)) throw InvalidArgument("cannot normalize an all-zero field to a measure");
    Array2D<double> w(f.side(), f.side());
    auto dst = w.values();
    auto src = f.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::abs(src[k]) / total;
    return DiscreteMeasure(std::move(w));
}

SinkhornResult sinkhorn_w2(const DiscreteMeasure& a, const DiscreteMeasure& b, const SinkhornOptions& opt) {
    if (!(opt.epsilon > 0.0)) throw InvalidArgument("sinkhorn epsilon must be positive");
    if (opt.max_iter < 1) throw InvalidArgument("sinkhorn max_iter must be at least 1");
    if (!(opt.tol > 0.0)) throw InvalidArgument("sinkhorn tol must be positive");
    if (a.side() != b.side()) throw SizeMismatch("sinkhorn measures must share a grid");
    const std::size_t n = a.side();

    const Array2D<double> la = log_weights(a);
    const Array2D<double> lb = log_weights(b);
    Array2D<double> f(n, n, 0.0), g(n, n, 0.0), ft(n, n), h(n, n);

    std::vector<double> schedule;
    if (opt.epsilon_scaling) {
        for (double e = 2.0; e > opt.epsilon; e *= 0.5) schedule.push_back(e);
    }
    schedule.push_back(opt.epsilon);

    SinkhornResult res;
    // With g current, ft = F(g) gives the row marginal a * exp((f - ft) / eps).
    auto row_violation = [&](double eps) {
        double v = 0.0;
        auto fv = f.values();
        auto ftv = ft.values();
        auto av = a.weights().values();
        for (std::size_t k = 0; k < fv.size(); ++k) {
            if (av[k] > 0.0) v += av[k] * std::abs(std::expm1((fv[k] - ftv[k]) / eps));
        }
        return v;
    };
    auto finish = [&](double eps, bool converged) {
        res.converged = converged;
        res.marginal_violation = row_violation(eps);
        auto fv = f.values();
        auto ftv = ft.values();
        auto gv = g.values();
        auto av = a.weights().values();
        auto bv = b.weights().values();
        double value = 0.0;
        for (std::size_t k = 0; k < fv.size(); ++k) {
            if (av[k] > 0.0) {
                const double r = av[k] * std::exp((fv[k] - ftv[k]) / eps);
                value += r * (fv[k] + eps * la.values()[k]);
            }
            if (bv[k] > 0.0) value += bv[k] * (gv[k] + eps * lb.values()[k]);
        }
        res.value = value;
        return res;
    };

    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        const double eps = schedule[stage];
        const bool last = stage + 1 == schedule.size();
        const double stage_tol = last ? opt.tol : std::max(opt.tol, 1e-3);
        LogKernel kernel(n, eps);
        fill_exponent(h, f, la, eps);
        kernel.apply(h, g);
        bool done = false;
        while (res.iterations < opt.max_iter) {
            ++res.iterations;
            fill_exponent(h, g, lb, eps);
            kernel.apply(h, ft);
            if (row_violation(eps) <= stage_tol) {
                done = true;
                break;
            }
            std::swap(f, ft);
            fill_exponent(h, f, la, eps);
            kernel.apply(h, g);
        }
        if (!done) {
            // Iteration budget spent; report at the epsilon reached so far.
            fill_exponent(h, g, lb, eps);
            kernel.apply(h, ft);
            return finish(eps, false);
        }
        if (last) return finish(eps, true);
    }
    return res;
}

double sinkhorn_divergence(const DiscreteMeasure& a, const DiscreteMeasure& b, const SinkhornOptions& opt) {
    const double ab = sinkhorn_w2(a, b, opt).value;
    const double aa = sinkhorn_w2(a, a, opt).value;
    const double bb = sinkhorn_w2(b, b, opt).value;
    return ab - 0.5 * aa - 0.5 * bb;
}

double mse(const Field2D& f, const Field2D& g) {
    if (f.side() != g.side()) throw SizeMismatch("mse operands differ in size");
    auto fv = f.values();
    auto gv = g.values();
    double s = 0.0;
    for (std::size_t k = 0; k < fv.size(); ++k) {
        const double d = fv[k] - gv[k];
        s += d * d;
    }
    return s / static_cast<double>(fv.size());
}

double ssim(const Field2D& f, const Field2D& g, const SsimOptions& opt) {
    if (f.side() != g.side()) throw SizeMismatch("ssim operands differ in size");
    const std::size_t m = f.side();
    const std::size_t w = opt.window;
    if (w < 2 || w > m) throw InvalidArgument("ssim window must be in [2, side]");
    double range = 0.0;
    for (double v : f.values()) range = std::max(range, std::abs(v));
    for (double v : g.values()) range = std::max(range, std::abs(v));
    if (range == 0.0) return 1.0;
    const double c1 = (opt.k1 * range) * (opt.k1 * range);
    const double c2 = (opt.k2 * range) * (opt.k2 * range);
    const double nw = static_cast<double>(w * w);

    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i0 = 0; i0 + w <= m; ++i0) {
        for (std::size_t j0 = 0; j0 + w <= m; ++j0) {
            double sx = 0.0, sy = 0.0;
            for (std::size_t i = i0; i < i0 + w; ++i) {
                for (std::size_t j = j0; j < j0 + w; ++j) {
                    sx += std::abs(f(i, j));
                    sy += std::abs(g(i, j));
                }
            }
            const double mx = sx / nw, my = sy / nw;
            double vx = 0.0, vy = 0.0, cxy = 0.0;
            for (std::size_t i = i0; i < i0 + w; ++i) {
                for (std::size_t j = j0; j < j0 + w; ++j) {
                    const double dx = std::abs(f(i, j)) - mx;
                    const double dy = std::abs(g(i, j)) - my;
                    vx += dx * dx;
                    vy += dy * dy;
                    cxy += dx * dy;
                }
            }
            vx /= nw - 1.0;
            vy /= nw - 1.0;
            cxy /= nw - 1.0;
            total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

std::vector<MetricRow> metric_sweep(const Field2D& f, std::span<const int> shifts, const SinkhornOptions& opt,
                                    const SsimOptions& ssim_opt) {
    const DiscreteMeasure a = to_measure(f);
    const double aa = sinkhorn_w2(a, a, opt).value;
    std::vector<MetricRow> rows;
    rows.reserve(shifts.size());
    for (int delta : shifts) {
        const Field2D fs = circular_shift(f, delta, 0);
        const DiscreteMeasure b = to_measure(fs);
        MetricRow r;
        r.delta = delta;
        r.mse = mse(f, fs);
        r.ssim = ssim(f, fs, ssim_opt);
        r.w2_smoothed = sinkhorn_w2(a, b, opt).value;
        const double bb = sinkhorn_w2(b, b, opt).value;
        r.w2_divergence = r.w2_smoothed - 0.5 * aa - 0.5 * bb;
        rows.push_back(r);
    }
    return rows;
}

void write_metric_csv(std::ostream& os, std::span<const MetricRow> rows) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "delta,mse,ssim,w2_smoothed,w2_divergence\n";
    for (const auto& r : rows) {
        os << r.delta << ',' << r.mse << ',' << r.ssim << ',' << r.w2_smoothed << ',' << r.w2_divergence << '\n';
    }
    os.precision(old);
}

}  // namespace wavefio
