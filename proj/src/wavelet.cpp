#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "wavid/error.hpp"
#include "wavid/simd/kernels.hpp"
#include "wavid/wavelet.hpp"

namespace wavid {
namespace {

double angular_frequency(std::size_t k, std::size_t L, double dt)
{
    const double two_pi = 2.0 * std::numbers::pi;
    const double kk = k <= L / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(L);
    return two_pi * kk / (static_cast<double>(L) * dt);
}

// sqrt(a) conj(psi_hat(a w_k)) for every bin of an L-point transform.
void scale_filter(const MotherWavelet& w, double a, double dt, std::vector<cplx>& out)
{
    const std::size_t L = out.size();
    const double sa = std::sqrt(a);
    for (std::size_t k = 0; k < L; ++k)
        out[k] = sa * std::conj(w.frequency_response(a * angular_frequency(k, L, dt)));
}

double* as_doubles(std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); }

} // namespace

void ScaleGrid::validate() const
{
    if (!(a_min > 0.0) || !std::isfinite(a_min) || !std::isfinite(a_max))
        throw ParameterError("scale grid: a_min must be finite and > 0");
    if (!(a_max > a_min))
        throw ParameterError("scale grid: a_max must exceed a_min");
    if (count < 2)
        throw ParameterError("scale grid: count must be >= 2");
}

std::vector<double> ScaleGrid::values() const
{
    validate();
    std::vector<double> v(count);
    const double last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / last;
        v[i] = spacing == Spacing::log ? a_min * std::pow(a_max / a_min, f) : a_min + (a_max - a_min) * f;
    }
    v.front() = a_min;
    v.back() = a_max;
    return v;
}

double ScaleGrid::dj() const
{
    validate();
    if (spacing != Spacing::log)
        throw UnsupportedError("scale grid: dj is defined for log spacing only");
    return std::log2(a_max / a_min) / static_cast<double>(count - 1);
}

std::size_t CoefficientSurface::coi_margin(std::size_t i) const
{
    const auto m = static_cast<std::size_t>(std::ceil(4.0 * scales[i] / dt));
    return std::min(m, n_translations);
}

std::size_t default_cwt_length(std::size_t n, double a_max, double dt)
{
    const double support = std::ceil(8.0 * a_max / dt);
    const std::size_t cap = 16 * n;
    const std::size_t pad = support >= static_cast<double>(cap) ? cap : static_cast<std::size_t>(support);
    return std::max(next_pow2(n + pad), next_pow2(2 * n));
}

CoefficientSurface cwt(const Signal& x, const MotherWavelet& w, const ScaleGrid& grid,
                       const CwtOptions& opts)
{
    grid.validate();
    const std::size_t n = x.size();
    if (n < 8)
        throw ShapeError("cwt: need at least 8 samples");
    const double dt = x.dt();
    if (grid.a_min < 2.0 * dt)
        throw ResolutionError("cwt: scale below 2 dt cannot be resolved");
    const std::size_t L = opts.fft_length ? opts.fft_length : default_cwt_length(n, grid.a_max, dt);
    if (L < n)
        throw ShapeError("cwt: fft length shorter than the record");

    CoefficientSurface s;
    s.scales = grid.values();
    s.grid = grid;
    s.wavelet = w;
    s.dt = dt;
    s.t0 = x.t0();
    s.n_translations = n;
    s.values.assign(s.scales.size() * n, cplx(0.0, 0.0));

    std::vector<cplx> X(L, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        X[i] = x[i];
    fft_inplace(X);

    const auto& k = simd::kernels();
    detail::parallel_for(s.scales.size(), opts.threads, [&](std::size_t i) {
        std::vector<cplx> buf(L);
        scale_filter(w, s.scales[i], dt, buf);
        k.cmul(as_doubles(X), as_doubles(buf), as_doubles(buf), L);
        ifft_inplace(buf);
        std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n), s.row(i));
    });
    return s;
}

double shift_check(const Signal& x, const MotherWavelet& w, const ScaleGrid& grid, std::size_t tau)
{
    const std::size_t n = x.size();
    if (4 * tau >= n)
        throw RangeError("shift_check: tau must be below a quarter of the record");
    std::vector<double> delayed(n + tau, 0.0);
    std::copy(x.samples().begin(), x.samples().end(), delayed.begin() + static_cast<std::ptrdiff_t>(tau));
    CwtOptions opts;
    opts.fft_length = default_cwt_length(n + tau, grid.a_max, x.dt());
    const auto base = cwt(x, w, grid, opts);
    const auto moved = cwt(Signal(std::move(delayed), x.dt(), x.t0()), w, grid, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < base.n_scales(); ++i) {
        const std::size_t m = base.coi_margin(i);
        if (2 * m >= n)
            continue;
        for (std::size_t b = m; b < n - m; ++b)
            worst = std::max(worst, std::abs(moved.at(i, b + tau) - base.at(i, b)));
    }
    return worst;
}

double calibrate_delta_constant(const MotherWavelet& w, const ScaleGrid& grid, double dt)
{
    if (!(dt > 0.0))
        throw ParameterError("calibrate: dt must be > 0");
    const double dj = grid.dj();
    std::vector<double> scales = grid.values();
    for (double a = grid.a_min; a > 0.5 * dt;) {
        a = a * std::exp2(-dj);
        scales.push_back(a);
    }
    const double want = std::max(1024.0, std::ceil(64.0 * grid.a_max / dt));
    const std::size_t L = next_pow2(static_cast<std::size_t>(want));
    double sum = 0.0;
    double magnitude = 0.0;
    for (double a : scales) {
        // coefficient at the centre of a unit sample: (1/L) sum_k sqrt(a) conj(psi_hat(a w_k))
        cplx acc(0.0, 0.0);
        for (std::size_t k = 0; k < L; ++k)
            acc += std::conj(w.frequency_response(a * angular_frequency(k, L, dt)));
        acc *= std::sqrt(a) / static_cast<double>(L);
        sum += acc.real() / std::sqrt(a);
        magnitude += std::abs(acc) / std::sqrt(a);
    }
    const double c = dj * std::sqrt(dt) * sum;
    if (!std::isfinite(c) || !(sum > 1e-6 * magnitude))
        throw CalibrationError("calibrate: delta response is not positive for " + w.spec());
    return c;
}

Signal icwt(const CoefficientSurface& s)
{
    if (s.grid.spacing != ScaleGrid::Spacing::log)
        throw UnsupportedError("icwt: linear scale grids are not supported");
    const double c = calibrate_delta_constant(s.wavelet, s.grid, s.dt);
    const std::size_t n = s.n_translations;
    std::vector<double> acc(n, 0.0);
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < s.n_scales(); ++i)
        k.accumulate_real_scaled(reinterpret_cast<const double*>(s.row(i)), 1.0 / std::sqrt(s.scales[i]),
                                 acc.data(), n);
    const double factor = s.grid.dj() * std::sqrt(s.dt) / c;
    for (auto& v : acc)
        v *= factor;
    return Signal(std::move(acc), s.dt, s.t0);
}

} // namespace wavid
