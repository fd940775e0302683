#include <algorithm>

#include "simd/kernels_internal.hpp"

namespace wavid::simd::detail {
namespace {

void cmul(const double* a, const double* b, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1];
        const double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ai * br + ar * bi;
    }
}

void cmul_conj(const double* a, const double* b, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1];
        const double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br + ai * bi;
        out[2 * i + 1] = ai * br - ar * bi;
    }
}

double dot(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void regularized_quotient(const double* cross, const double* power, double floor, double add,
                          double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::max(power[i] + add, floor);
        if (d > 0.0) {
            out[2 * i] = cross[2 * i] / d;
            out[2 * i + 1] = cross[2 * i + 1] / d;
        } else {
            out[2 * i] = 0.0;
            out[2 * i + 1] = 0.0;
        }
    }
}

void norm_sq(const double* a, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[2 * i] * a[2 * i] + a[2 * i + 1] * a[2 * i + 1];
}

void accumulate_real_scaled(const double* w, double s, double* acc, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        acc[i] = acc[i] + s * w[2 * i];
}

void axpy(double s, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] = y[i] + s * x[i];
}

} // namespace

const KernelTable& scalar_table()
{
    static const KernelTable table{Level::scalar, "scalar", cmul, cmul_conj, dot,
                                   regularized_quotient, norm_sq, accumulate_real_scaled, axpy};
    return table;
}

} // namespace wavid::simd::detail
