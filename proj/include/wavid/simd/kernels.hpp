#pragma once

#include <cstddef>

// Inner loops shared by the spectral, wavelet and identification code.
// Complex arrays are interleaved (re, im) doubles; n counts complex elements
// unless stated otherwise.
namespace wavid::simd {

enum class Level { scalar, avx2 };

struct KernelTable {
    Level level;
    const char* name;

    // out = a * b
    void (*cmul)(const double* a, const double* b, double* out, std::size_t n);
    // out = a * conj(b)
    void (*cmul_conj)(const double* a, const double* b, double* out, std::size_t n);
    // sum a[i] * b[i] over n reals
    double (*dot)(const double* a, const double* b, std::size_t n);
    // out = cross / d with d = max(power + add, floor); zero where d <= 0
    void (*regularized_quotient)(const double* cross, const double* power, double floor,
                                 double add, double* out, std::size_t n);
    // out[i] = |a[i]|^2 (out is real, length n)
    void (*norm_sq)(const double* a, double* out, std::size_t n);
    // acc[i] += s * re(w[i]) (acc is real, length n)
    void (*accumulate_real_scaled)(const double* w, double s, double* acc, std::size_t n);
    // y[i] += s * x[i] over n reals
    void (*axpy)(double s, const double* x, double* y, std::size_t n);
};

// Table picked once per process. WAVID_SIMD=scalar|avx2 overrides detection.
const KernelTable& kernels();

// Table for a given level, or nullptr when this build or CPU lacks it.
const KernelTable* kernels_for(Level level);

} // namespace wavid::simd
