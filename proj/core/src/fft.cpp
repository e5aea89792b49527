#include "wavefio/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "wavefio/error.hpp"

namespace wavefio {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per (rows, cols, sign) and kept for the life of
// the process.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(rows, cols, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(rows * cols);
        auto* out = fftw_alloc_complex(rows * cols);
        fftw_plan p = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in, out,
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (p == nullptr) throw Error("FFTW failed to create a plan");
        plans_.emplace(key, p);
        return p;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

Array2D<Complex> transform(const Array2D<Complex>& x, int sign) {
    if (x.empty()) return x;
    Array2D<Complex> out(x.rows(), x.cols());
    fftw_plan p = PlanCache::instance().get(x.rows(), x.cols(), sign);
    // FFTW only reads the input of an out-of-place complex transform.
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(x.data()));
    fftw_execute_dft(p, in, reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out.values()) v *= scale;
    return out;
}

}  // namespace

Spectrum2D::Spectrum2D(Array2D<Complex> data) : data_(std::move(data)) {
    if (data_.rows() != data_.cols() || !is_valid_side(data_.rows())) {
        throw InvalidArgument("spectrum must be square with a power-of-two side >= 8");
    }
}

double Spectrum2D::norm2() const noexcept {
    double s = 0.0;
    for (const auto& v : data_.values()) s += std::norm(v);
    return std::sqrt(s);
}

Array2D<Complex> fft2_complex(const Array2D<Complex>& x) { return transform(x, FFTW_FORWARD); }

Array2D<Complex> ifft2_complex(const Array2D<Complex>& x) { return transform(x, FFTW_BACKWARD); }

Spectrum2D fft2(const Field2D& f) {
    const std::size_t m = f.side();
    Array2D<Complex> x(m, m);
    auto src = f.values();
    auto dst = x.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k];
    return Spectrum2D(fft2_complex(x));
}

Field2D ifft2(const Spectrum2D& s) {
    const Array2D<Complex> x = ifft2_complex(s.array());
    Array2D<double> out(x.rows(), x.cols());
    double peak = 0.0;
    double residue = 0.0;
    auto src = x.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) {
        dst[k] = src[k].real();
        peak = std::max(peak, std::abs(src[k].real()));
        residue = std::max(residue, std::abs(src[k].imag()));
    }
    if (residue > 1e-6 * std::max(1.0, peak)) {
        throw NumericalError("inverse transform has imaginary residue " + std::to_string(residue) +
                             "; spectrum is not Hermitian");
    }
    return Field2D(std::move(out));
}

}  // namespace wavefio
