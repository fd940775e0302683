#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "wavid/error.hpp"
#include "wavid/wavelet.hpp"

namespace wavid {
namespace {

constexpr double pi = std::numbers::pi;
constexpr int max_order = 30;

// Probabilists' Hermite polynomial He_n(t).
double hermite(int n, double t)
{
    double h0 = 1.0;
    if (n == 0)
        return h0;
    double h1 = t;
    for (int k = 1; k < n; ++k) {
        const double h2 = t * h1 - k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

cplx i_pow(int n)
{
    switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

// sign(w)^n |w|^n e^{-q w^2} without overflow for large |w|.
double power_gauss(double w, int n, double q)
{
    if (w == 0.0)
        return 0.0;
    const double mag = std::exp(n * std::log(std::fabs(w)) - q * w * w);
    return (w < 0.0 && (n % 2 == 1)) ? -mag : mag;
}

struct Moments {
    double mean;
    double energy;
};

// Trapezoid rule over [-s, s]; exact to rounding for these smooth, rapidly
// decaying integrands once the step resolves the oscillation.
template <class F>
Moments trapezoid(F&& psi, double s, double h)
{
    const auto n = static_cast<long>(std::ceil(s / h));
    cplx sum(0.0, 0.0);
    double energy = 0.0;
    for (long k = -n; k <= n; ++k) {
        const cplx v = psi(static_cast<double>(k) * h);
        sum += v;
        energy += std::norm(v);
    }
    return {std::abs(sum) * h, energy * h};
}

Moments shannon_moments()
{
    // Slow 1/t decay: wide window, coarse step. Computed once per process.
    static const Moments m = [] {
        const double h = 0.25;
        const long n = 1L << 22; // 2^20 / h
        double sum = 1.0;        // psi(0)
        double energy = 1.0;
        for (long k = 1; k <= n; ++k) {
            const double t = static_cast<double>(k) * h;
            const double v = (std::sin(2.0 * pi * t) - std::sin(pi * t)) / (pi * t);
            sum += 2.0 * v;
            energy += 2.0 * v * v;
        }
        return Moments{std::fabs(sum) * h, energy * h};
    }();
    return m;
}

std::string format_param(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int parse_order(const std::string& spec, const std::string& text)
{
    std::size_t used = 0;
    int n = 0;
    try {
        n = std::stoi(text, &used);
    } catch (const std::exception&) {
        throw ParseError("wavelet: bad order in '" + spec + "'");
    }
    if (used != text.size())
        throw ParseError("wavelet: bad order in '" + spec + "'");
    return n;
}

} // namespace

MotherWavelet::MotherWavelet(Kind kind, double param) : kind_(kind), param_(param)
{
    switch (kind_) {
    case Kind::morlet: {
        const double w0 = param_;
        const double c = 1.0 / std::sqrt(1.0 + std::exp(-w0 * w0) - 2.0 * std::exp(-0.75 * w0 * w0));
        norm_ = c * std::pow(pi, -0.25);
        break;
    }
    case Kind::dog:
        norm_ = std::exp(-0.5 * std::lgamma(param_ + 0.5));
        break;
    case Kind::paul: {
        const double m = param_;
        norm_ = std::exp(m * std::log(2.0) + std::lgamma(m + 1.0)
                         - 0.5 * (std::log(pi) + std::lgamma(2.0 * m + 1.0)));
        break;
    }
    case Kind::gauss:
        norm_ = std::exp(-0.5 * ((param_ - 0.5) * std::log(2.0) + std::lgamma(param_ + 0.5)));
        break;
    case Kind::shannon:
        norm_ = 1.0;
        break;
    }
    check_admissible();
}

MotherWavelet MotherWavelet::morlet(double omega0)
{
    if (!(omega0 >= 5.0) || !std::isfinite(omega0))
        throw ParameterError("morlet: omega0 must be >= 5");
    return MotherWavelet(Kind::morlet, omega0);
}

MotherWavelet MotherWavelet::dog(int n)
{
    if (n < 1 || n > max_order)
        throw ParameterError("dog: order must be in [1, 30]");
    return MotherWavelet(Kind::dog, n);
}

MotherWavelet MotherWavelet::paul(int m)
{
    if (m < 1 || m > max_order)
        throw ParameterError("paul: order must be in [1, 30]");
    return MotherWavelet(Kind::paul, m);
}

MotherWavelet MotherWavelet::gauss(int n)
{
    if (n < 1 || n > max_order)
        throw ParameterError("gauss: order must be in [1, 30]");
    return MotherWavelet(Kind::gauss, n);
}

MotherWavelet MotherWavelet::shannon() { return MotherWavelet(Kind::shannon, 0.0); }

MotherWavelet MotherWavelet::parse(const std::string& spec)
{
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const bool has_arg = colon != std::string::npos;
    const std::string arg = has_arg ? spec.substr(colon + 1) : std::string();
    if (name == "morlet") {
        if (!has_arg)
            return morlet();
        std::size_t used = 0;
        double w0 = 0.0;
        try {
            w0 = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw ParseError("wavelet: bad omega0 in '" + spec + "'");
        }
        if (used != arg.size())
            throw ParseError("wavelet: bad omega0 in '" + spec + "'");
        return morlet(w0);
    }
    if (name == "mhat" && !has_arg)
        return mexican_hat();
    if (name == "shannon" && !has_arg)
        return shannon();
    if (has_arg) {
        if (name == "dog")
            return dog(parse_order(spec, arg));
        if (name == "paul")
            return paul(parse_order(spec, arg));
        if (name == "gauss")
            return gauss(parse_order(spec, arg));
    }
    throw ParseError("unknown wavelet '" + spec + "'");
}

std::string MotherWavelet::spec() const
{
    switch (kind_) {
    case Kind::morlet: return "morlet:" + format_param(param_);
    case Kind::dog: return "dog:" + std::to_string(order());
    case Kind::paul: return "paul:" + std::to_string(order());
    case Kind::gauss: return "gauss:" + std::to_string(order());
    case Kind::shannon: return "shannon";
    }
    return {};
}

cplx MotherWavelet::time_domain(double t) const
{
    switch (kind_) {
    case Kind::morlet: {
        const double w0 = param_;
        const double env = std::exp(-0.5 * t * t);
        return norm_ * env * (cplx(std::cos(w0 * t), std::sin(w0 * t)) - std::exp(-0.5 * w0 * w0));
    }
    case Kind::dog:
        return -norm_ * hermite(order(), t) * std::exp(-0.5 * t * t);
    case Kind::paul: {
        const int m = order();
        return norm_ * i_pow(m) * std::pow(cplx(1.0, -t), -(m + 1));
    }
    case Kind::gauss: {
        const int n = order();
        const double sign = (n % 2) ? -1.0 : 1.0;
        return norm_ * sign * std::pow(2.0, 0.5 * n) * hermite(n, std::sqrt(2.0) * t) * std::exp(-t * t);
    }
    case Kind::shannon:
        if (t == 0.0)
            return 1.0;
        return (std::sin(2.0 * pi * t) - std::sin(pi * t)) / (pi * t);
    }
    return 0.0;
}

cplx MotherWavelet::frequency_response(double w) const
{
    switch (kind_) {
    case Kind::morlet: {
        const double w0 = param_;
        const double d = w - w0;
        return norm_ * std::sqrt(2.0 * pi) * (std::exp(-0.5 * d * d) - std::exp(-0.5 * (w0 * w0 + w * w)));
    }
    case Kind::dog: {
        const int n = order();
        const double sign = (n % 2) ? 1.0 : -1.0; // (-1)^{n+1}
        return sign * norm_ * std::sqrt(2.0 * pi) * i_pow(n) * power_gauss(w, n, 0.5);
    }
    case Kind::paul: {
        if (w <= 0.0)
            return 0.0;
        const double m = param_;
        const double mag = std::exp(m * std::log(2.0) + std::log(2.0) + 0.5 * std::log(pi)
                                    - 0.5 * std::lgamma(2.0 * m + 1.0) + m * std::log(w) - w);
        return i_pow(order()) * mag;
    }
    case Kind::gauss: {
        const int n = order();
        return norm_ * std::sqrt(pi) * i_pow(n) * power_gauss(w, n, 0.25);
    }
    case Kind::shannon: {
        const double a = std::fabs(w);
        return (a >= pi && a <= 2.0 * pi) ? 1.0 : 0.0;
    }
    }
    return 0.0;
}

void MotherWavelet::check_admissible()
{
    Moments m{};
    switch (kind_) {
    case Kind::morlet:
        m = trapezoid([this](double t) { return time_domain(t); }, 14.0, 1.0 / 64.0);
        break;
    case Kind::dog:
    case Kind::gauss:
        m = trapezoid([this](double t) { return time_domain(t); }, 12.0 + 2.0 * std::sqrt(param_), 1.0 / 64.0);
        break;
    case Kind::paul: {
        // t = tan(theta) maps the algebraic tails onto a finite interval.
        const long n = 8192;
        const double h = pi / static_cast<double>(n);
        cplx sum(0.0, 0.0);
        double energy = 0.0;
        for (long k = 0; k < n; ++k) {
            const double th = -0.5 * pi + (static_cast<double>(k) + 0.5) * h;
            const double jac = 1.0 / (std::cos(th) * std::cos(th));
            const cplx v = time_domain(std::tan(th));
            sum += v * jac;
            energy += std::norm(v) * jac;
        }
        m = {std::abs(sum) * h, energy * h};
        break;
    }
    case Kind::shannon:
        m = shannon_moments();
        break;
    }
    mean_ = m.mean;
    energy_ = m.energy;
    if (!(mean_ < 1e-6) || !(std::fabs(energy_ - 1.0) < 1e-6))
        throw ParameterError("wavelet " + spec() + " fails the admissibility check (mean "
                             + format_param(mean_) + ", energy " + format_param(energy_) + ")");
}

} // namespace wavid
