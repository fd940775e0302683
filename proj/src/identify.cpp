#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "wavid/error.hpp"
#include "wavid/identify.hpp"
#include "wavid/simd/kernels.hpp"

namespace wavid {
namespace {

constexpr double dead_threshold = 1e-12;

const double* dbl(const std::vector<cplx>& v) { return reinterpret_cast<const double*>(v.data()); }
double* dbl(std::vector<cplx>& v) { return reinterpret_cast<double*>(v.data()); }

// Zero-padded spectrum of one channel row, with its paired power
// |A_k|^2 + |A_-k|^2.
struct ChannelInput {
    std::vector<cplx> A;
    std::vector<double> sxx;
    double energy = 0.0;
};

ChannelInput channel_input(const cplx* row, std::size_t length, std::size_t padded)
{
    ChannelInput in;
    in.A.assign(padded, cplx(0.0, 0.0));
    std::copy(row, row + length, in.A.begin());
    for (std::size_t i = 0; i < length; ++i)
        in.energy += std::norm(row[i]);
    fft_inplace(in.A);
    std::vector<double> p(padded);
    simd::kernels().norm_sq(dbl(in.A), p.data(), padded);
    in.sxx.resize(padded);
    for (std::size_t k = 0; k < padded; ++k)
        in.sxx[k] = p[k] + p[(padded - k) % padded];
    return in;
}

ChannelEstimate estimate(const ChannelInput& in, const cplx* row_y, std::size_t length,
                         const RegularizationPolicy& reg)
{
    const std::size_t P = in.A.size();
    const auto& k = simd::kernels();
    std::vector<cplx> B(P, cplx(0.0, 0.0));
    std::copy(row_y, row_y + length, B.begin());
    fft_inplace(B);
    std::vector<cplx> C(P);
    k.cmul_conj(dbl(B), dbl(in.A), dbl(C), P);
    std::vector<cplx> syx(P);
    for (std::size_t i = 0; i < P; ++i)
        syx[i] = C[i] + std::conj(C[(P - i) % P]);
    const double peak = *std::max_element(in.sxx.begin(), in.sxx.end());
    const bool water = reg.kind == RegularizationPolicy::Kind::water_level;
    ChannelEstimate est;
    est.floor = water ? reg.level * peak : 0.0;
    est.add = water ? 0.0 : reg.level * peak;
    est.H.resize(P);
    k.regularized_quotient(dbl(syx), in.sxx.data(), est.floor, est.add, dbl(est.H), P);
    est.Sxx = in.sxx;
    return est;
}

// Fraction of each bin that the regularized quotient passes through.
double band_mask(double sxx, const ChannelEstimate& e)
{
    const double d = std::max(sxx + e.add, e.floor);
    return d > 0.0 ? sxx / d : 0.0;
}

std::vector<double> kernel_from_spectrum(std::vector<cplx> H, std::size_t n_lags, double dt)
{
    ifft_inplace(H);
    std::vector<double> h(n_lags);
    for (std::size_t i = 0; i < n_lags; ++i)
        h[i] = H[i].real() / dt;
    return h;
}

double l2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

// y_n = dt sum_k h_k row_{n-k}, complex row, causal, same length as the row.
std::vector<cplx> convolve_row(const cplx* row, std::size_t n, const double* h, std::size_t taps, double dt)
{
    const std::size_t len = next_pow2(n + taps);
    std::vector<cplx> a(len, cplx(0.0, 0.0)), b(len, cplx(0.0, 0.0));
    std::copy(row, row + n, a.begin());
    for (std::size_t j = 0; j < taps; ++j)
        b[j] = dt * h[j];
    fft_inplace(a);
    fft_inplace(b);
    simd::kernels().cmul(dbl(a), dbl(b), dbl(a), len);
    ifft_inplace(a);
    a.resize(n);
    return a;
}

void check_pair(const Signal& x, const Signal& y)
{
    if (x.size() != y.size())
        throw ShapeError("identify: input and output lengths differ");
    if (x.dt() != y.dt())
        throw ShapeError("identify: input and output dt differ");
}

void check_grid(const ITFSurface& itf, const ScaleGrid& grid, double dt)
{
    const auto scales = grid.values();
    if (scales.size() != itf.scales.size())
        throw ShapeError("reconstruct: scale grid does not match the ITF surface");
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (std::fabs(scales[i] - itf.scales[i]) > 1e-9 * scales[i])
            throw ShapeError("reconstruct: scale grid does not match the ITF surface");
    if (std::fabs(dt - itf.dt) > 1e-12 * itf.dt)
        throw ShapeError("reconstruct: signal dt does not match the ITF surface");
}

} // namespace

ChannelEstimate channel_spectrum(const cplx* row_y, const cplx* row_x, std::size_t length,
                                 const RegularizationPolicy& reg, std::size_t padded)
{
    reg.validate();
    if (padded < length)
        throw ShapeError("channel_spectrum: padded length below row length");
    return estimate(channel_input(row_x, length, padded), row_y, length, reg);
}

std::vector<double> channel_deconvolve(const std::vector<cplx>& row_y, const std::vector<cplx>& row_x,
                                       const RegularizationPolicy& reg, std::size_t n_lags, double dt)
{
    if (row_y.size() != row_x.size())
        throw ShapeError("channel_deconvolve: row lengths differ");
    if (n_lags == 0 || row_x.size() < 2 * n_lags)
        throw InsufficientDataError("channel_deconvolve: rows must hold at least 2 * n_lags samples");
    if (!(dt > 0.0))
        throw ParameterError("channel_deconvolve: dt must be > 0");
    const std::size_t P = next_pow2(2 * row_x.size());
    auto est = channel_spectrum(row_y.data(), row_x.data(), row_x.size(), reg, P);
    return kernel_from_spectrum(std::move(est.H), n_lags, dt);
}

ITFSurface identify_itf(const Signal& x, const Signal& y, const MotherWavelet& w, const ScaleGrid& grid,
                        const RegularizationPolicy& reg, std::size_t n_lags, const IdentifyOptions& opts)
{
    check_pair(x, y);
    reg.validate();
    grid.validate();
    const std::size_t N = x.size();
    if (n_lags == 0 || n_lags > N / 2)
        throw InsufficientDataError("identify: n_lags must be in [1, N/2]");
    const double dt = x.dt();
    const std::size_t M = n_lags;
    const std::size_t Ne = N + M;
    const std::size_t P = next_pow2(2 * Ne);

    std::vector<double> xe(x.samples());
    xe.resize(Ne, 0.0);
    const Signal x_ext(xe, dt, x.t0());
    CwtOptions copts;
    copts.fft_length = default_cwt_length(Ne, grid.a_max, dt);
    copts.threads = opts.threads;
    const auto WX = cwt(x_ext, w, grid, copts);
    const std::size_t S = WX.n_scales();

    ITFSurface out;
    out.scales = WX.scales;
    out.n_lags = n_lags;
    out.dt = dt;
    out.reg = reg;
    out.dead.assign(S, false);

    std::vector<double> tail(M, 0.0);
    std::vector<ChannelInput> inputs;
    std::vector<ChannelEstimate> est(S);
    std::size_t input_window = 0;
    std::vector<cplx> Hbar(P);

    for (unsigned pass = 0; pass <= opts.refine_passes; ++pass) {
        const std::size_t window = pass == 0 ? N : Ne;
        if (window != input_window) {
            inputs.assign(S, ChannelInput{});
            detail::parallel_for(S, opts.threads, [&](std::size_t i) {
                inputs[i] = channel_input(WX.row(i), window, P);
            });
            double emax = 0.0;
            for (const auto& in : inputs)
                emax = std::max(emax, in.energy);
            for (std::size_t i = 0; i < S; ++i)
                out.dead[i] = !(inputs[i].energy >= dead_threshold * emax) || emax == 0.0;
            input_window = window;
        }
        std::vector<double> ye(y.samples());
        ye.resize(Ne, 0.0);
        std::copy(tail.begin(), tail.end(), ye.begin() + static_cast<std::ptrdiff_t>(N));
        const auto WY = cwt(Signal(std::move(ye), dt, y.t0()), w, grid, copts);

        detail::parallel_for(S, opts.threads, [&](std::size_t i) {
            if (out.dead[i]) {
                est[i] = ChannelEstimate{std::vector<cplx>(P, cplx(0.0, 0.0)), std::vector<double>(P, 0.0), 0.0, 0.0};
                return;
            }
            est[i] = estimate(inputs[i], WY.row(i), window, reg);
        });

        // per-bin energy-weighted pool, reduced in scale order
        std::vector<cplx> num(P, cplx(0.0, 0.0));
        std::vector<double> den(P, 0.0);
        for (std::size_t i = 0; i < S; ++i) {
            if (out.dead[i])
                continue;
            for (std::size_t k = 0; k < P; ++k) {
                num[k] += est[i].Sxx[k] * est[i].H[k];
                den[k] += est[i].Sxx[k];
            }
        }
        for (std::size_t k = 0; k < P; ++k)
            Hbar[k] = den[k] > 0.0 ? num[k] / den[k] : cplx(0.0, 0.0);
        out.average = kernel_from_spectrum(Hbar, n_lags, dt);

        if (pass < opts.refine_passes) {
            const auto pred = convolve_direct(x_ext, out.average);
            std::copy(pred.samples().begin() + static_cast<std::ptrdiff_t>(N), pred.samples().end(), tail.begin());
        }
    }

    out.values.assign(S * n_lags, 0.0);
    out.dispersion.assign(S, 0.0);
    const double hbar_norm = l2(out.average);
    detail::parallel_for(S, opts.threads, [&](std::size_t i) {
        if (out.dead[i])
            return;
        const auto h = kernel_from_spectrum(est[i].H, n_lags, dt);
        std::copy(h.begin(), h.end(), out.row(i));
        std::vector<cplx> banded(P);
        for (std::size_t k = 0; k < P; ++k)
            banded[k] = Hbar[k] * band_mask(est[i].Sxx[k], est[i]);
        const auto ref = kernel_from_spectrum(std::move(banded), n_lags, dt);
        double diff = 0.0;
        for (std::size_t j = 0; j < n_lags; ++j)
            diff += (h[j] - ref[j]) * (h[j] - ref[j]);
        out.dispersion[i] = hbar_norm > 0.0 ? std::sqrt(diff) / hbar_norm : 0.0;
    });
    return out;
}

Signal reconstruct(const Signal& x, const ITFSurface& itf, const MotherWavelet& w, const ScaleGrid& grid,
                   ReconstructMode mode)
{
    check_grid(itf, grid, x.dt());
    if (mode == ReconstructMode::time_domain)
        return convolve_direct(x, itf.average);
    auto WX = cwt(x, w, grid);
    const std::size_t n = WX.n_translations;
    for (std::size_t i = 0; i < WX.n_scales(); ++i) {
        const auto r = convolve_row(WX.row(i), n, itf.row(i), itf.n_lags, x.dt());
        std::copy(r.begin(), r.end(), WX.row(i));
    }
    return icwt(WX);
}

RestoreReport restore_error(const Signal& y, const Signal& y_hat)
{
    if (y.size() != y_hat.size())
        throw ShapeError("restore_error: lengths differ");
    if (y.dt() != y_hat.dt())
        throw ShapeError("restore_error: dt differs");
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - y_hat[i];
        err += d * d;
        ref += y[i] * y[i];
    }
    RestoreReport r;
    r.epsilon_rms = std::sqrt(err / static_cast<double>(y.size()));
    if (ref > 0.0)
        r.epsilon_rel = std::sqrt(err) / std::sqrt(ref);
    return r;
}

std::vector<double> channel_restore_errors(const Signal& x, const Signal& y, const ITFSurface& itf,
                                           const MotherWavelet& w, const ScaleGrid& grid)
{
    check_pair(x, y);
    check_grid(itf, grid, x.dt());
    const auto WX = cwt(x, w, grid);
    const auto WY = cwt(y, w, grid);
    const std::size_t n = WX.n_translations;
    std::vector<double> errs(WX.n_scales(), 0.0);
    detail::parallel_for(WX.n_scales(), 0, [&](std::size_t i) {
        const auto pred = convolve_row(WX.row(i), n, itf.row(i), itf.n_lags, x.dt());
        std::size_t lo = WX.coi_margin(i), hi = n - lo;
        if (lo >= hi) {
            lo = 0;
            hi = n;
        }
        double e = 0.0, r = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            e += std::norm(WY.at(i, j) - pred[j]);
            r += std::norm(WY.at(i, j));
        }
        errs[i] = r > 0.0 ? std::sqrt(e / r) : (e > 0.0 ? 1.0 : 0.0);
    });
    return errs;
}

} // namespace wavid
