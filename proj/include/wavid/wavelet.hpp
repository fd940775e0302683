#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "wavid/signals.hpp"
#include "wavid/spectral.hpp"

namespace wavid {

// Unit-energy, zero-mean analyzing wavelets with closed-form frequency
// responses. Fourier convention: psi_hat(w) = integral psi(t) e^{-iwt} dt.
class MotherWavelet {
public:
    enum class Kind { morlet, dog, paul, gauss, shannon };

    static MotherWavelet morlet(double omega0 = 6.0);
    static MotherWavelet mexican_hat() { return dog(2); }
    static MotherWavelet dog(int n);
    static MotherWavelet paul(int m);
    static MotherWavelet gauss(int n);
    static MotherWavelet shannon();

    // morlet:<w0> | mhat | dog:<n> | paul:<m> | gauss:<n> | shannon
    static MotherWavelet parse(const std::string& spec);
    std::string spec() const;

    Kind kind() const { return kind_; }
    double omega0() const { return param_; }
    int order() const { return static_cast<int>(param_); }
    bool is_complex() const { return kind_ == Kind::morlet || kind_ == Kind::paul; }

    cplx time_domain(double t) const;
    cplx frequency_response(double omega) const;

    // Quadrature results recorded when the wavelet was built.
    double quadrature_mean() const { return mean_; }
    double quadrature_energy() const { return energy_; }

private:
    MotherWavelet(Kind kind, double param);
    void check_admissible();

    Kind kind_;
    double param_;
    double norm_ = 1.0;
    double mean_ = 0.0;
    double energy_ = 0.0;
};

struct ScaleGrid {
    enum class Spacing { log, linear };

    double a_min = 0.0;
    double a_max = 0.0;
    std::size_t count = 0;
    Spacing spacing = Spacing::log;

    void validate() const;
    std::vector<double> values() const;
    // log2 of the ratio between neighbouring scales (log spacing only).
    double dj() const;
};

struct CoefficientSurface {
    std::vector<double> scales;
    ScaleGrid grid;
    MotherWavelet wavelet = MotherWavelet::morlet();
    double dt = 1.0;
    double t0 = 0.0;
    std::size_t n_translations = 0;
    std::vector<cplx> values; // row-major, one row per scale

    std::size_t n_scales() const { return scales.size(); }
    const cplx* row(std::size_t i) const { return values.data() + i * n_translations; }
    cplx* row(std::size_t i) { return values.data() + i * n_translations; }
    cplx at(std::size_t i, std::size_t j) const { return values[i * n_translations + j]; }
    // Samples at each end of row i inside the cone of influence (4a).
    std::size_t coi_margin(std::size_t i) const;
};

struct CwtOptions {
    // Zero-padded transform length; 0 picks one from the record and a_max.
    std::size_t fft_length = 0;
    // Worker threads; 0 uses the hardware count.
    unsigned threads = 0;
};

std::size_t default_cwt_length(std::size_t n, double a_max, double dt);

// W[a, b] = a^{-1/2} integral x(t) conj(psi((t - b) / a)) dt, evaluated per
// scale as IDFT(X_k sqrt(a) conj(psi_hat(a w_k))) on a zero-padded record.
CoefficientSurface cwt(const Signal& x, const MotherWavelet& w, const ScaleGrid& grid,
                       const CwtOptions& opts = {});

// Largest |cwt(delay(x, tau))[a, b] - cwt(x)[a, b - tau]| away from the
// 4a margins. The delayed record keeps all of x (it grows by tau samples).
double shift_check(const Signal& x, const MotherWavelet& w, const ScaleGrid& grid,
                   std::size_t tau);

// x(b) = (dj sqrt(dt) / C) sum_i Re W[a_i, b] / sqrt(a_i). Log grids only.
Signal icwt(const CoefficientSurface& s);

// Sum-over-scales response at the centre of the transform of a unit sample.
// The grid is continued below a_min with the same spacing down to dt / 2 so
// the constant covers the full band of the delta.
double calibrate_delta_constant(const MotherWavelet& w, const ScaleGrid& grid, double dt);

struct DwtTree {
    std::vector<double> approximation;
    std::vector<std::vector<double>> details; // details[0] is the finest level
};

DwtTree dwt_d4(const std::vector<double>& x, std::size_t levels);
std::vector<double> idwt_d4(const DwtTree& tree);

} // namespace wavid
