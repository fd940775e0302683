#include <algorithm>
#include <cmath>

#include "wavid/error.hpp"
#include "wavid/simd/kernels.hpp"
#include "wavid/spectral.hpp"

namespace wavid {

void RegularizationPolicy::validate() const
{
    if (!(level >= 0.0) || !std::isfinite(level))
        throw ParameterError("regularization level must be finite and >= 0");
    if (kind == Kind::tikhonov && level == 0.0)
        throw ParameterError("tikhonov regularization needs level > 0");
}

ComplexSpectrum dft(const std::vector<cplx>& x, double dt)
{
    if (x.empty())
        throw ShapeError("dft: empty input");
    ComplexSpectrum s{x, dt};
    fft_inplace(s.bins);
    return s;
}

std::vector<cplx> idft(const ComplexSpectrum& s)
{
    if (s.bins.empty())
        throw ShapeError("idft: empty spectrum");
    std::vector<cplx> x = s.bins;
    ifft_inplace(x);
    return x;
}

Signal convolve_direct(const Signal& x, const std::vector<double>& h)
{
    if (h.empty())
        throw ShapeError("convolve: empty kernel");
    const std::size_t n = x.size();
    const double* xs = x.samples().data();
    std::vector<double> y(n, 0.0);
    const auto& k = simd::kernels();
    const std::size_t taps = std::min(h.size(), n);
    for (std::size_t j = 0; j < taps; ++j) {
        const double w = x.dt() * h[j];
        if (w != 0.0)
            k.axpy(w, xs, y.data() + j, n - j);
    }
    return Signal(std::move(y), x.dt(), x.t0());
}

Signal convolve_fft(const Signal& x, const std::vector<double>& h)
{
    if (h.empty())
        throw ShapeError("convolve: empty kernel");
    const std::size_t n = x.size();
    const std::size_t taps = std::min(h.size(), n);
    const std::size_t len = next_pow2(n + taps - 1);
    std::vector<cplx> a(len, cplx(0.0, 0.0));
    std::vector<cplx> b(len, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        a[i] = x[i];
    for (std::size_t j = 0; j < taps; ++j)
        b[j] = x.dt() * h[j];
    fft_inplace(a);
    fft_inplace(b);
    simd::kernels().cmul(reinterpret_cast<const double*>(a.data()),
                         reinterpret_cast<const double*>(b.data()),
                         reinterpret_cast<double*>(a.data()), len);
    ifft_inplace(a);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = a[i].real();
    return Signal(std::move(y), x.dt(), x.t0());
}

ComplexSpectrum spectral_divide(const ComplexSpectrum& num, const ComplexSpectrum& den,
                                const RegularizationPolicy& reg)
{
    reg.validate();
    if (num.bins.size() != den.bins.size())
        throw ShapeError("spectral_divide: bin counts differ");
    const std::size_t n = den.bins.size();
    const auto& k = simd::kernels();
    std::vector<double> power(n);
    k.norm_sq(reinterpret_cast<const double*>(den.bins.data()), power.data(), n);
    const double peak = n ? *std::max_element(power.begin(), power.end()) : 0.0;
    std::vector<cplx> cross(n);
    k.cmul_conj(reinterpret_cast<const double*>(num.bins.data()),
                reinterpret_cast<const double*>(den.bins.data()),
                reinterpret_cast<double*>(cross.data()), n);
    const bool water = reg.kind == RegularizationPolicy::Kind::water_level;
    const double floor = water ? reg.level * peak : 0.0;
    const double add = water ? 0.0 : reg.level * peak;
    ComplexSpectrum out{std::vector<cplx>(n), num.dt};
    k.regularized_quotient(reinterpret_cast<const double*>(cross.data()), power.data(), floor, add,
                           reinterpret_cast<double*>(out.bins.data()), n);
    return out;
}

} // namespace wavid
