#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wavid/identify.hpp"
#include "wavid/signals.hpp"
#include "wavid/wavelet.hpp"

namespace wavid {

// "t,value" header, then "%.17g,%.17g" rows. The reader derives dt from the
// first and last time stamps and rejects steps off by more than 1e-9 relative.
Signal read_signal_csv(std::istream& in);
void write_signal_csv(std::ostream& out, const Signal& x);

// wcs-v1 <wavelet> <dt> <n_scales> <n_translations>
// <scales...>
// <re:im ...>  one line per scale
void write_surface(std::ostream& out, const CoefficientSurface& s);
CoefficientSurface read_surface(std::istream& in);

// itf-v1 <wavelet> <dt> <n_scales> <n_lags>
// <scales...>
// <h ...>  one line per scale
// reg <water|tikhonov> <level>
// average <h ...>
// dead <0|1 ...>
// dispersion <d ...>
void write_itf(std::ostream& out, const ITFSurface& s, const MotherWavelet& w);
ITFSurface read_itf(std::istream& in, MotherWavelet* w = nullptr);

// Log grid when the scales have a constant ratio (to 1e-9), linear otherwise.
ScaleGrid infer_grid(const std::vector<double>& scales);

// Magnitude matrix of a surface file: rows ordered a_min first.
struct MagnitudeMatrix {
    std::vector<double> scales;
    std::size_t cols = 0;
    std::vector<double> values;
};

// Reads either surface format and returns |values|.
MagnitudeMatrix read_magnitudes(std::istream& in);

// Plain (P3) pixmap of m with a_max in the top row. v = |W| / max|W| maps to
// r = 3v, g = 3v - 1, b = 3v - 2 (each clamped to [0, 1], times 255).
void write_heatmap_ppm(std::ostream& out, const MagnitudeMatrix& m);
void write_magnitude_csv(std::ostream& out, const MagnitudeMatrix& m);

std::string format_double(double v);

} // namespace wavid
