#pragma once

#include <complex>
#include <cstddef>

#include "wavefio/array2d.hpp"
#include "wavefio/field.hpp"

namespace wavefio {

using Complex = std::complex<double>;

// Unitary 2D DFT of an M x M field, stored in standard DFT index order.
// Index k along either axis stands for the frequency frequency_of_index(k, M)
// in cycles per unit domain, so entry (k1, k2) multiplies
// exp(2 pi i (xi1 x1 + xi2 x2)) with xi = (f(k1), f(k2)).
class Spectrum2D {
public:
    explicit Spectrum2D(std::size_t m) : data_(m, m) {}
    explicit Spectrum2D(Array2D<Complex> data);

    std::size_t side() const noexcept { return data_.rows(); }
    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_(i, j); }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_(i, j); }
    Array2D<Complex>& array() noexcept { return data_; }
    const Array2D<Complex>& array() const noexcept { return data_; }

    double norm2() const noexcept;

private:
    Array2D<Complex> data_;
};

// Signed frequency for DFT index k: k for k < M/2, k - M otherwise,
// i.e. values in [-M/2, M/2).
constexpr long frequency_of_index(std::size_t k, std::size_t m) noexcept {
    const long kk = static_cast<long>(k);
    const long mm = static_cast<long>(m);
    return kk < mm / 2 ? kk : kk - mm;
}

// Index of the negated frequency, (M - k) mod M.
constexpr std::size_t negated_index(std::size_t k, std::size_t m) noexcept {
    return (m - k) % m;
}

Spectrum2D fft2(const Field2D& f);

// Inverse of fft2. The imaginary residue is discarded; a residue above
// 1e-6 relative to the field peak (floor 1) means the spectrum was not
// Hermitian and raises NumericalError.
Field2D ifft2(const Spectrum2D& s);

// Complex-to-complex transforms on arbitrary square power-of-two arrays.
Array2D<Complex> fft2_complex(const Array2D<Complex>& x);
Array2D<Complex> ifft2_complex(const Array2D<Complex>& x);

}  // namespace wavefio
