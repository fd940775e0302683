#pragma once

// Independent reference computations for the tests. Everything here is the
// textbook definition evaluated directly, sharing no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// O(N^2) DFT with the angle reduced modulo N before the trig call.
inline std::vector<cplx> naive_dft(const std::vector<cplx>& x, bool inverse = false)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<long double> acc = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t r = (k * j) % n;
            const long double ang = sign * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r)
                / static_cast<long double>(n);
            acc += std::complex<long double>(x[j].real(), x[j].imag())
                * std::complex<long double>(std::cos(ang), std::sin(ang));
        }
        out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
        if (inverse)
            out[k] /= static_cast<double>(n);
    }
    return out;
}

// Full linear convolution times dt, truncated to the length of x.
inline std::vector<double> nested_convolution(const std::vector<double>& x, const std::vector<double>& h, double dt)
{
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        long double acc = 0.0L;
        for (std::size_t k = 0; k < h.size() && k <= n; ++k)
            acc += static_cast<long double>(h[k]) * x[n - k];
        y[n] = static_cast<double>(acc * dt);
    }
    return y;
}

// Complex sequence convolved with a real kernel, full length.
inline std::vector<cplx> full_convolution(const std::vector<cplx>& x, const std::vector<double>& h, double dt)
{
    std::vector<cplx> y(x.size() + h.size() - 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < h.size(); ++k)
            y[i + k] += dt * h[k] * x[i];
    return y;
}

// Gaussian elimination with partial pivoting on a dense copy.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (std::fabs(a[i][c]) > std::fabs(a[p][c]))
                p = i;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        if (a[c][c] == 0.0)
            throw std::runtime_error("dense_solve: singular");
        for (std::size_t i = c + 1; i < n; ++i) {
            const double f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j)
                a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// W(a, b) = a^{-1/2} sum_n x_n conj(psi((t_n - b) / a)) dt by direct summation.
template <class Psi>
cplx quadrature_cwt(const std::vector<double>& x, double dt, Psi&& psi, double a, double b)
{
    std::complex<long double> acc = 0.0L;
    for (std::size_t n = 0; n < x.size(); ++n) {
        const cplx v = std::conj(psi((static_cast<double>(n) * dt - b) / a));
        acc += std::complex<long double>(v.real(), v.imag()) * static_cast<long double>(x[n]);
    }
    const long double f = dt / std::sqrt(a);
    return {static_cast<double>(acc.real() * f), static_cast<double>(acc.imag() * f)};
}

// Biased, mean-removed correlation straight from the definition.
inline std::vector<double> correlation(const std::vector<double>& x, const std::vector<double>& y, std::size_t max_lag)
{
    const std::size_t n = x.size();
    long double mx = 0.0L, my = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i + k < n; ++i)
            acc += (x[i] - mx) * (y[i + k] - my);
        r[k] = static_cast<double>(acc / n);
    }
    return r;
}

inline double second_order_h(double wn, double zeta, double gain, double t)
{
    const double wd = wn * std::sqrt(1.0 - zeta * zeta);
    return gain * wn * wn / wd * std::exp(-zeta * wn * t) * std::sin(wd * t);
}

inline double first_order_h(double T, double gain, double t) { return gain / T * std::exp(-t / T); }

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& ref)
{
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        num += (static_cast<long double>(a[i]) - ref[i]) * (static_cast<long double>(a[i]) - ref[i]);
        den += static_cast<long double>(ref[i]) * ref[i];
    }
    return static_cast<double>(std::sqrt(num / den));
}

// Hand-rolled generators for the property tests.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }

    std::vector<double> reals(std::size_t n, double scale = 1.0)
    {
        std::vector<double> v(n);
        for (auto& x : v)
            x = scale * normal();
        return v;
    }
    std::vector<cplx> complexes(std::size_t n)
    {
        std::vector<cplx> v(n);
        for (auto& x : v)
            x = {normal(), normal()};
        return v;
    }
    // white noise through a random stable AR(2) filter plus a random offset
    std::vector<double> coloured(std::size_t n)
    {
        const double r = uniform(0.0, 0.95), th = uniform(0.0, std::numbers::pi);
        const double a1 = 2.0 * r * std::cos(th), a2 = -r * r;
        const double offset = uniform(-3.0, 3.0);
        std::vector<double> v(n);
        double y1 = 0.0, y2 = 0.0;
        for (auto& x : v) {
            const double y = a1 * y1 + a2 * y2 + normal();
            y2 = y1;
            y1 = y;
            x = y + offset;
        }
        return v;
    }
};

} // namespace oracle
