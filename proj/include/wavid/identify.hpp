#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wavid/signals.hpp"
#include "wavid/spectral.hpp"
#include "wavid/wavelet.hpp"

namespace wavid {

struct ITFSurface {
    std::vector<double> scales;
    std::size_t n_lags = 0;
    double dt = 1.0;
    RegularizationPolicy reg;
    std::vector<double> values;  // row-major h(a_i, tau_j), 1/s
    std::vector<double> average; // per-frequency energy-weighted mean kernel
    std::vector<bool> dead;      // channels without input energy
    std::vector<double> dispersion;

    std::size_t n_scales() const { return scales.size(); }
    const double* row(std::size_t i) const { return values.data() + i * n_lags; }
    double* row(std::size_t i) { return values.data() + i * n_lags; }
};

// One channel's quotient on a zero-padded row pair. The real-kernel least
// squares form pairs bins k and -k so the estimate stays Hermitian:
//   H_k = (Y_k conj X_k + conj(Y_-k conj X_-k)) / reg(|X_k|^2 + |X_-k|^2)
// which is the plain ratio for real rows.
struct ChannelEstimate {
    std::vector<cplx> H;      // transfer estimate on the padded grid
    std::vector<double> Sxx;  // input power per bin
    double floor = 0.0;       // water-level floor used
    double add = 0.0;         // tikhonov term used
};

ChannelEstimate channel_spectrum(const cplx* row_y, const cplx* row_x, std::size_t length,
                                 const RegularizationPolicy& reg, std::size_t padded);

// h_{a*}(tau) = Re idft(H)[0, n_lags) / dt. Rows must hold >= 2 n_lags samples.
std::vector<double> channel_deconvolve(const std::vector<cplx>& row_y,
                                       const std::vector<cplx>& row_x,
                                       const RegularizationPolicy& reg, std::size_t n_lags,
                                       double dt);

struct IdentifyOptions {
    // Passes that re-take the rows with y extended by the tail predicted from
    // the current average kernel. 0 runs the single plain division.
    unsigned refine_passes = 4;
    unsigned threads = 0;
};

ITFSurface identify_itf(const Signal& x, const Signal& y, const MotherWavelet& w,
                        const ScaleGrid& grid, const RegularizationPolicy& reg,
                        std::size_t n_lags, const IdentifyOptions& opts = {});

struct WienerHopfResult {
    std::vector<double> h;
    double relative_residual = 0.0;
    double condition_estimate = 0.0;
    bool used_fallback = false;
};

// Solves sum_k h_k Rxx(|j - k|) dt = Rxy(j), j < n_lags.
WienerHopfResult wiener_hopf_identify(const CorrelationFunction& rxx,
                                      const CorrelationFunction& rxy, std::size_t n_lags);

enum class ReconstructMode { wavelet_domain, time_domain };

Signal reconstruct(const Signal& x, const ITFSurface& itf, const MotherWavelet& w,
                   const ScaleGrid& grid, ReconstructMode mode);

struct RestoreReport {
    std::optional<double> epsilon_rel; // empty when |y| == 0
    double epsilon_rms = 0.0;
    std::vector<double> per_channel_error;
};

RestoreReport restore_error(const Signal& y, const Signal& y_hat);

// Relative error of each channel's forward model, |W^Y_a - h_a * W^X_a| / |W^Y_a|,
// over the record excluding the cone of influence.
std::vector<double> channel_restore_errors(const Signal& x, const Signal& y,
                                           const ITFSurface& itf, const MotherWavelet& w,
                                           const ScaleGrid& grid);

} // namespace wavid
