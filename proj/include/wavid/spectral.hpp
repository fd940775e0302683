#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "wavid/signals.hpp"

namespace wavid {

using cplx = std::complex<double>;

struct ComplexSpectrum {
    std::vector<cplx> bins;
    double dt = 1.0;
};

struct RegularizationPolicy {
    enum class Kind { water_level, tikhonov };

    Kind kind = Kind::water_level;
    double level = 1e-3; // relative to max |den|^2

    // Throws ParameterError for a negative level or tikhonov with level 0.
    void validate() const;
};

std::size_t next_pow2(std::size_t n);

// In-place transforms of any length. forward: X_k = sum x_n e^{-2 pi i kn/N};
// inverse includes the 1/N factor. Power-of-two lengths use radix-2, others
// Bluestein.
void fft_inplace(std::vector<cplx>& a);
void ifft_inplace(std::vector<cplx>& a);

ComplexSpectrum dft(const std::vector<cplx>& x, double dt = 1.0);
std::vector<cplx> idft(const ComplexSpectrum& s);

// y_n = dt * sum_k h_k x_{n-k}, truncated to x.size() samples.
Signal convolve_direct(const Signal& x, const std::vector<double>& h);
Signal convolve_fft(const Signal& x, const std::vector<double>& h);

// water_level: num conj(den) / max(|den|^2, level * max|den|^2)
// tikhonov:    num conj(den) / (|den|^2 + level * max|den|^2)
// Bins with a zero denominator come out as zero.
ComplexSpectrum spectral_divide(const ComplexSpectrum& num, const ComplexSpectrum& den,
                                const RegularizationPolicy& reg);

} // namespace wavid
