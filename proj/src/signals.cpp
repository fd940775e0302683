#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "wavid/error.hpp"
#include "wavid/signals.hpp"
#include "wavid/simd/kernels.hpp"
#include "wavid/spectral.hpp"

namespace wavid {

Signal::Signal(std::vector<double> samples, double dt, double t0)
    : samples_(std::move(samples)), dt_(dt), t0_(t0)
{
    if (samples_.empty())
        throw ShapeError("signal: no samples");
    if (!(dt_ > 0.0) || !std::isfinite(dt_))
        throw ParameterError("signal: dt must be finite and > 0");
    if (!std::isfinite(t0_))
        throw ParameterError("signal: t0 must be finite");
    for (double v : samples_)
        if (!std::isfinite(v))
            throw ParameterError("signal: non-finite sample");
}

namespace {

double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Signal generate_stochastic(const StochasticSpec& spec)
{
    if (spec.length == 0)
        throw ParameterError("generate: length must be >= 1");
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt))
        throw ParameterError("generate: dt must be finite and > 0");
    const auto& d = spec.distribution;
    if (!std::isfinite(d.a) || !std::isfinite(d.b))
        throw ParameterError("generate: non-finite distribution parameter");
    if (d.kind == Distribution::Kind::uniform && !(d.a < d.b))
        throw ParameterError("generate: uniform needs lo < hi");
    if (d.kind == Distribution::Kind::gaussian && !(d.b > 0.0))
        throw ParameterError("generate: gaussian needs stddev > 0");

    std::mt19937_64 rng(spec.seed);
    std::vector<double> out(spec.length);
    if (d.kind == Distribution::Kind::uniform) {
        for (auto& v : out)
            v = d.a + (d.b - d.a) * unit_draw(rng);
    } else {
        for (std::size_t i = 0; i < out.size(); i += 2) {
            const double u1 = 1.0 - unit_draw(rng);
            const double u2 = unit_draw(rng);
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double th = 2.0 * std::numbers::pi * u2;
            out[i] = d.a + d.b * r * std::cos(th);
            if (i + 1 < out.size())
                out[i + 1] = d.a + d.b * r * std::sin(th);
        }
    }
    return Signal(std::move(out), spec.dt);
}

SummaryStats summary_stats(const Signal& x)
{
    const auto& s = x.samples();
    const double n = static_cast<double>(s.size());
    SummaryStats st;
    double sum = 0.0, sq = 0.0;
    st.min = s[0];
    st.max = s[0];
    for (double v : s) {
        sum += v;
        sq += v * v;
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    st.mean = sum / n;
    double var = 0.0;
    for (double v : s)
        var += (v - st.mean) * (v - st.mean);
    st.variance = var / n;
    st.rms = std::sqrt(sq / n);
    // rounding can push the mean a hair outside [min, max] for constant data
    st.mean = std::clamp(st.mean, st.min, st.max);
    return st;
}

CorrelationFunction cross_correlation(const Signal& x, const Signal& y, std::size_t max_lag)
{
    if (x.size() != y.size())
        throw ShapeError("cross_correlation: length mismatch");
    if (x.dt() != y.dt())
        throw ShapeError("cross_correlation: dt mismatch");
    const std::size_t n = x.size();
    if (max_lag >= n)
        throw RangeError("correlation: max_lag must be < signal length");
    const double mx = summary_stats(x).mean;
    const double my = summary_stats(y).mean;
    std::vector<double> xc(n), yc(n);
    for (std::size_t i = 0; i < n; ++i) {
        xc[i] = x[i] - mx;
        yc[i] = y[i] - my;
    }
    const auto& k = simd::kernels();
    CorrelationFunction r;
    r.dt = x.dt();
    r.lags.resize(max_lag + 1);
    r.values.resize(max_lag + 1);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        r.lags[lag] = lag;
        r.values[lag] = k.dot(xc.data(), yc.data() + lag, n - lag) / static_cast<double>(n);
    }
    return r;
}

CorrelationFunction autocorrelation(const Signal& x, std::size_t max_lag)
{
    return cross_correlation(x, x, max_lag);
}

std::vector<SpectrumPoint> periodogram(const Signal& x)
{
    const std::size_t n = x.size();
    if (n < 2)
        throw ShapeError("periodogram: need at least 2 samples");
    std::vector<cplx> a(x.samples().begin(), x.samples().end());
    fft_inplace(a);
    std::vector<SpectrumPoint> out(n / 2 + 1);
    const double fn = static_cast<double>(n);
    for (std::size_t k = 0; k <= n / 2; ++k)
        out[k] = {static_cast<double>(k) / (fn * x.dt()), std::norm(a[k]) / fn};
    return out;
}

std::vector<HistogramBin> histogram(const Signal& x, std::size_t bins)
{
    if (bins == 0)
        throw ParameterError("histogram: bins must be >= 1");
    const auto st = summary_stats(x);
    double lo = st.min, hi = st.max;
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b)
        out[b] = {lo + width * static_cast<double>(b),
                  b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1), 0};
    for (double v : x.samples()) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        out[std::min(b, bins - 1)].count++;
    }
    return out;
}

} // namespace wavid
