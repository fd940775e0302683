#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wavid {

// Uniformly sampled real series. Sample i sits at t0 + i * dt.
class Signal {
public:
    Signal(std::vector<double> samples, double dt, double t0 = 0.0);

    const std::vector<double>& samples() const { return samples_; }
    double dt() const { return dt_; }
    double t0() const { return t0_; }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }
    double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }

private:
    std::vector<double> samples_;
    double dt_;
    double t0_;
};

struct Distribution {
    enum class Kind { uniform, gaussian };

    Kind kind = Kind::gaussian;
    double a = 0.0; // lo or mean
    double b = 1.0; // hi or stddev

    static Distribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    static Distribution gaussian(double mean, double stddev) { return {Kind::gaussian, mean, stddev}; }
};

struct StochasticSpec {
    Distribution distribution;
    std::size_t length = 1;
    double dt = 1.0;
    std::uint64_t seed = 0;
};

struct CorrelationFunction {
    std::vector<std::size_t> lags;
    std::vector<double> values;
    double dt = 1.0;
};

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;
    double min = 0.0;
    double max = 0.0;
    double rms = 0.0;
};

struct SpectrumPoint {
    double frequency; // Hz
    double power;
};

struct HistogramBin {
    double lo;
    double hi;
    std::size_t count;
};

// Samples come from std::mt19937_64 seeded with spec.seed. A draw u in [0, 1)
// takes the top 53 bits of one engine output. Gaussian samples use the
// Box-Muller pair from two draws (u1 -> 1 - u1 to avoid log(0)); both members
// of the pair are emitted, cosine branch first.
Signal generate_stochastic(const StochasticSpec& spec);

SummaryStats summary_stats(const Signal& x);

// Biased, mean-removed estimates: R(k) = (1/N) sum (x_i - mx)(y_{i+k} - my).
CorrelationFunction autocorrelation(const Signal& x, std::size_t max_lag);
CorrelationFunction cross_correlation(const Signal& x, const Signal& y, std::size_t max_lag);

// |DFT(x)_k|^2 / N at k / (N dt), k = 0..N/2.
std::vector<SpectrumPoint> periodogram(const Signal& x);

// Equal-width bins over [min, max]; the top edge is inclusive.
std::vector<HistogramBin> histogram(const Signal& x, std::size_t bins);

} // namespace wavid
