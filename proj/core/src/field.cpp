#include "wavefio/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavefio/error.hpp"

namespace wavefio {

bool is_valid_side(std::size_t m) noexcept {
    return m >= 8 && (m & (m - 1)) == 0;
}

namespace {

void require_side(std::size_t m) {
    if (!is_valid_side(m)) {
        throw InvalidArgument("field side must be a power of two >= 8, got " + std::to_string(m));
    }
}

void require_same(const Field2D& a, const Field2D& b) {
    if (a.side() != b.side()) {
        throw SizeMismatch("field sides differ: " + std::to_string(a.side()) + " vs " +
                           std::to_string(b.side()));
    }
}

}  // namespace

Field2D::Field2D(std::size_t m) : data_(m, m, 0.0) { require_side(m); }

Field2D::Field2D(Array2D<double> samples) : data_(std::move(samples)) {
    if (data_.rows() != data_.cols()) {
        throw InvalidArgument("field must be square, got " + std::to_string(data_.rows()) + "x" +
                              std::to_string(data_.cols()));
    }
    require_side(data_.rows());
    for (double v : data_.values()) {
        if (!std::isfinite(v)) throw InvalidArgument("field contains a non-finite value");
    }
}

Field2D Field2D::from_function(std::size_t m, const std::function<double(const Vec2&)>& f) {
    require_side(m);
    Array2D<double> a(m, m);
    const double h = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            a(i, j) = f({static_cast<double>(i) * h, static_cast<double>(j) * h});
        }
    }
    return Field2D(std::move(a));
}

Vec2 Field2D::point(std::size_t i, std::size_t j) const noexcept {
    const double m = static_cast<double>(side());
    return {static_cast<double>(i) / m, static_cast<double>(j) / m};
}

double Field2D::norm2() const noexcept {
    double s = 0.0;
    for (double v : data_.values()) s += v * v;
    return std::sqrt(s);
}

double Field2D::norm1() const noexcept {
    double s = 0.0;
    for (double v : data_.values()) s += std::abs(v);
    return s;
}

double Field2D::max_abs() const noexcept {
    double s = 0.0;
    for (double v : data_.values()) s = std::max(s, std::abs(v));
    return s;
}

Field2D operator+(const Field2D& a, const Field2D& b) {
    require_same(a, b);
    Array2D<double> out = a.array();
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] += bv[k];
    return Field2D(std::move(out));
}

Field2D operator-(const Field2D& a, const Field2D& b) {
    require_same(a, b);
    Array2D<double> out = a.array();
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bv[k];
    return Field2D(std::move(out));
}

Field2D operator*(double s, const Field2D& a) {
    Array2D<double> out = a.array();
    for (double& v : out.values()) v *= s;
    return Field2D(std::move(out));
}

double dot(const Field2D& a, const Field2D& b) {
    require_same(a, b);
    double s = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return s;
}

double relative_l2(const Field2D& a, const Field2D& b) {
    const double d = (a - b).norm2();
    const double nb = b.norm2();
    return nb > 0.0 ? d / nb : d;
}

Field2D circular_shift(const Field2D& f, long di, long dj) {
    const long m = static_cast<long>(f.side());
    Array2D<double> out(f.side(), f.side());
    for (long i = 0; i < m; ++i) {
        const long si = ((i - di) % m + m) % m;
        for (long j = 0; j < m; ++j) {
            const long sj = ((j - dj) % m + m) % m;
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                f(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
        }
    }
    return Field2D(std::move(out));
}

PixelGrid canonical_grid(std::size_t m) {
    require_side(m);
    PixelGrid g(m, m);
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            g(i, j) = {static_cast<double>(i) / md, static_cast<double>(j) / md};
        }
    }
    return g;
}

}  // namespace wavefio
