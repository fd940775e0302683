#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "wavid/error.hpp"
#include "wavid/io.hpp"

namespace wavid {
namespace {

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

double parse_number(const std::string& text, const char* what)
{
    if (text.empty())
        throw ParseError(std::string("empty ") + what);
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size() || !std::isfinite(v))
        throw ParseError(std::string("bad ") + what + " '" + text + "'");
    return v;
}

std::size_t parse_count(const std::string& text, const char* what)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(std::string("bad ") + what + " '" + text + "'");
    return static_cast<std::size_t>(std::stoull(text));
}

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

std::string next_line(std::istream& in, const char* what)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(std::string("unexpected end of file reading ") + what);
    strip_cr(line);
    return line;
}

struct Header {
    std::string tag;
    std::string wavelet;
    double dt = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

Header read_header(std::istream& in)
{
    const auto tok = split_ws(next_line(in, "header"));
    if (tok.size() != 5)
        throw ParseError("surface header must have 5 fields");
    Header h;
    h.tag = tok[0];
    if (h.tag != "wcs-v1" && h.tag != "itf-v1")
        throw ParseError("unknown surface tag '" + h.tag + "'");
    h.wavelet = tok[1];
    h.dt = parse_number(tok[2], "dt");
    h.rows = parse_count(tok[3], "scale count");
    h.cols = parse_count(tok[4], "column count");
    if (!(h.dt > 0.0) || h.rows == 0 || h.cols == 0)
        throw ParseError("surface header has empty dimensions or dt <= 0");
    return h;
}

std::vector<double> read_reals(const std::string& line, std::size_t count, const char* what)
{
    const auto tok = split_ws(line);
    if (tok.size() != count)
        throw ParseError(std::string("wrong number of values in ") + what);
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
        v[i] = parse_number(tok[i], what);
    return v;
}

std::vector<double> read_scales(std::istream& in, std::size_t rows)
{
    auto s = read_reals(next_line(in, "scales"), rows, "scale line");
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!(s[i] > 0.0) || (i > 0 && !(s[i] > s[i - 1])))
            throw ParseError("scales must be positive and increasing");
    return s;
}

std::vector<double> prefixed(std::istream& in, const std::string& key, std::size_t count)
{
    const std::string line = next_line(in, key.c_str());
    if (line.compare(0, key.size() + 1, key + " ") != 0 && !(count == 0 && line == key))
        throw ParseError("expected '" + key + "' line");
    return read_reals(line.substr(std::min(line.size(), key.size() + 1)), count, key.c_str());
}

void write_line(std::ostream& out, const std::vector<double>& v)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out << ' ';
        out << format_double(v[i]);
    }
    out << '\n';
}

} // namespace

ScaleGrid infer_grid(const std::vector<double>& scales)
{
    ScaleGrid g;
    g.a_min = scales.front();
    g.a_max = scales.back();
    g.count = scales.size();
    g.spacing = ScaleGrid::Spacing::log;
    if (scales.size() < 2)
        return g;
    const auto log_values = g.values();
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (std::fabs(log_values[i] - scales[i]) > 1e-9 * scales[i]) {
            g.spacing = ScaleGrid::Spacing::linear;
            break;
        }
    return g;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Signal read_signal_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("csv: empty input");
    strip_cr(line);
    if (line != "t,value")
        throw ParseError("csv: header must be 't,value'");
    std::vector<double> t, v;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ParseError("csv: line " + std::to_string(lineno) + " needs two fields");
        t.push_back(parse_number(line.substr(0, comma), "time"));
        v.push_back(parse_number(line.substr(comma + 1), "value"));
    }
    if (t.size() < 2)
        throw ParseError("csv: need at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0))
        throw ParseError("csv: time stamps must increase");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::fabs((t[i] - t[i - 1]) - dt) > 1e-9 * dt)
            throw ParseError("csv: non-uniform sampling at row " + std::to_string(i + 1));
    return Signal(std::move(v), dt, t.front());
}

void write_signal_csv(std::ostream& out, const Signal& x)
{
    out << "t,value\n";
    char buf[96];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x.time(i), x[i]);
        out << buf;
    }
}

void write_surface(std::ostream& out, const CoefficientSurface& s)
{
    out << "wcs-v1 " << s.wavelet.spec() << ' ' << format_double(s.dt) << ' ' << s.n_scales() << ' '
        << s.n_translations << '\n';
    write_line(out, s.scales);
    char buf[96];
    for (std::size_t i = 0; i < s.n_scales(); ++i) {
        const cplx* r = s.row(i);
        for (std::size_t j = 0; j < s.n_translations; ++j) {
            std::snprintf(buf, sizeof buf, j ? " %.17g:%.17g" : "%.17g:%.17g", r[j].real(), r[j].imag());
            out << buf;
        }
        out << '\n';
    }
}

CoefficientSurface read_surface(std::istream& in)
{
    const Header h = read_header(in);
    if (h.tag != "wcs-v1")
        throw ParseError("expected a wcs-v1 surface");
    CoefficientSurface s;
    s.wavelet = MotherWavelet::parse(h.wavelet);
    s.dt = h.dt;
    s.scales = read_scales(in, h.rows);
    s.grid = infer_grid(s.scales);
    s.n_translations = h.cols;
    s.values.resize(h.rows * h.cols);
    for (std::size_t i = 0; i < h.rows; ++i) {
        const auto tok = split_ws(next_line(in, "surface row"));
        if (tok.size() != h.cols)
            throw ParseError("surface row " + std::to_string(i) + " has the wrong length");
        for (std::size_t j = 0; j < h.cols; ++j) {
            const auto colon = tok[j].find(':');
            if (colon == std::string::npos)
                throw ParseError("surface value must be re:im");
            s.values[i * h.cols + j] = {parse_number(tok[j].substr(0, colon), "real part"),
                                        parse_number(tok[j].substr(colon + 1), "imaginary part")};
        }
    }
    return s;
}

void write_itf(std::ostream& out, const ITFSurface& s, const MotherWavelet& w)
{
    out << "itf-v1 " << w.spec() << ' ' << format_double(s.dt) << ' ' << s.n_scales() << ' ' << s.n_lags << '\n';
    write_line(out, s.scales);
    for (std::size_t i = 0; i < s.n_scales(); ++i)
        write_line(out, std::vector<double>(s.row(i), s.row(i) + s.n_lags));
    out << "reg " << (s.reg.kind == RegularizationPolicy::Kind::water_level ? "water" : "tikhonov") << ' '
        << format_double(s.reg.level) << '\n';
    out << "average ";
    write_line(out, s.average);
    out << "dead";
    for (bool d : s.dead)
        out << ' ' << (d ? 1 : 0);
    out << '\n';
    out << "dispersion ";
    write_line(out, s.dispersion);
}

ITFSurface read_itf(std::istream& in, MotherWavelet* w)
{
    const Header h = read_header(in);
    if (h.tag != "itf-v1")
        throw ParseError("expected an itf-v1 surface");
    const auto wavelet = MotherWavelet::parse(h.wavelet);
    if (w)
        *w = wavelet;
    ITFSurface s;
    s.dt = h.dt;
    s.n_lags = h.cols;
    s.scales = read_scales(in, h.rows);
    s.values.reserve(h.rows * h.cols);
    for (std::size_t i = 0; i < h.rows; ++i) {
        const auto row = read_reals(next_line(in, "itf row"), h.cols, "itf row");
        s.values.insert(s.values.end(), row.begin(), row.end());
    }
    const auto reg = split_ws(next_line(in, "reg"));
    if (reg.size() != 3 || reg[0] != "reg" || (reg[1] != "water" && reg[1] != "tikhonov"))
        throw ParseError("expected 'reg <water|tikhonov> <level>' line");
    s.reg.kind = reg[1] == "water" ? RegularizationPolicy::Kind::water_level : RegularizationPolicy::Kind::tikhonov;
    s.reg.level = parse_number(reg[2], "regularization level");
    s.average = prefixed(in, "average", h.cols);
    const auto dead = prefixed(in, "dead", h.rows);
    for (double d : dead) {
        if (d != 0.0 && d != 1.0)
            throw ParseError("dead flags must be 0 or 1");
        s.dead.push_back(d == 1.0);
    }
    s.dispersion = prefixed(in, "dispersion", h.rows);
    return s;
}

MagnitudeMatrix read_magnitudes(std::istream& in)
{
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    MagnitudeMatrix m;
    std::istringstream probe(text);
    std::string tag;
    probe >> tag;
    std::istringstream body(text);
    if (tag == "wcs-v1") {
        const auto s = read_surface(body);
        m.scales = s.scales;
        m.cols = s.n_translations;
        m.values.resize(s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i)
            m.values[i] = std::abs(s.values[i]);
    } else if (tag == "itf-v1") {
        const auto s = read_itf(body);
        m.scales = s.scales;
        m.cols = s.n_lags;
        m.values.resize(s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i)
            m.values[i] = std::fabs(s.values[i]);
    } else {
        throw ParseError("not a surface file");
    }
    return m;
}

void write_heatmap_ppm(std::ostream& out, const MagnitudeMatrix& m)
{
    const std::size_t rows = m.scales.size();
    double peak = 0.0;
    for (double v : m.values)
        peak = std::max(peak, v);
    auto channel = [](double v) {
        return static_cast<int>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
    };
    out << "P3\n" << m.cols << ' ' << rows << "\n255\n";
    for (std::size_t r = rows; r-- > 0;) {
        std::size_t width = 0;
        for (std::size_t c = 0; c < m.cols; ++c) {
            const double v = peak > 0.0 ? m.values[r * m.cols + c] / peak : 0.0;
            const std::string px = std::to_string(channel(3.0 * v)) + ' ' + std::to_string(channel(3.0 * v - 1.0))
                + ' ' + std::to_string(channel(3.0 * v - 2.0));
            // plain pixmap lines stay under 70 characters
            if (width > 0 && width + 1 + px.size() > 70) {
                out << '\n';
                width = 0;
            }
            if (width > 0) {
                out << ' ';
                ++width;
            }
            out << px;
            width += px.size();
        }
        out << '\n';
    }
}

void write_magnitude_csv(std::ostream& out, const MagnitudeMatrix& m)
{
    out << "scale";
    for (std::size_t c = 0; c < m.cols; ++c)
        out << ",m" << c;
    out << '\n';
    for (std::size_t r = 0; r < m.scales.size(); ++r) {
        out << format_double(m.scales[r]);
        for (std::size_t c = 0; c < m.cols; ++c)
            out << ',' << format_double(m.values[r * m.cols + c]);
        out << '\n';
    }
}

} // namespace wavid
