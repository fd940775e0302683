#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "wavid/error.hpp"
#include "wavid/spectral.hpp"
#include "wavid/systems.hpp"

namespace wavid {
namespace {

// Envelope level below which the sampled kernel is cut off.
constexpr double kernel_cutoff = 1e-17;

double number(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError("model: bad number '" + text + "' for " + what);
    }
    if (used != text.size() || !std::isfinite(v))
        throw ParseError("model: bad number '" + text + "' for " + what);
    return v;
}

std::map<std::string, std::string> key_values(const std::string& body, const std::string& ctx)
{
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const auto comma = body.find(',', pos);
        const std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("model: expected key=value in '" + ctx + "'");
        if (!kv.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
            throw ParseError("model: repeated key in '" + ctx + "'");
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return kv;
}

LtiModel parse_lti(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("model: expected fo:... or so:... in '" + text + "'");
    const std::string kind = text.substr(0, colon);
    auto kv = key_values(text.substr(colon + 1), text);
    auto take = [&](const std::string& key, bool required, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (required)
                throw ParseError("model: missing " + key + " in '" + text + "'");
            return fallback;
        }
        const double v = number(it->second, key);
        kv.erase(it);
        return v;
    };
    LtiModel m;
    if (kind == "fo") {
        const double T = take("T", true, 0.0);
        m = LtiModel::first_order(T, take("gain", false, 1.0));
    } else if (kind == "so") {
        const double wn = take("wn", true, 0.0);
        const double zeta = take("zeta", true, 0.0);
        m = LtiModel::second_order(wn, zeta, take("gain", false, 1.0));
    } else {
        throw ParseError("model: unknown linear block '" + kind + "'");
    }
    if (!kv.empty())
        throw ParseError("model: unknown key '" + kv.begin()->first + "' in '" + text + "'");
    return m;
}

Nonlinearity parse_nl(const std::string& text)
{
    if (text == "identity")
        return Nonlinearity::identity();
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw ParseError("model: bad nonlinearity '" + text + "'");
    const std::string name = text.substr(0, eq);
    const std::string arg = text.substr(eq + 1);
    if (name == "sat")
        return Nonlinearity::saturation(number(arg, "sat"));
    if (name == "deadzone")
        return Nonlinearity::deadzone(number(arg, "deadzone"));
    if (name == "cubic") {
        const auto comma = arg.find(',');
        if (comma == std::string::npos)
            throw ParseError("model: cubic needs c1,c3");
        return Nonlinearity::cubic(number(arg.substr(0, comma), "c1"), number(arg.substr(comma + 1), "c3"));
    }
    throw ParseError("model: unknown nonlinearity '" + name + "'");
}

// Shortest text that parses back to v.
std::string fmt(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string lti_string(const LtiModel& m)
{
    if (m.kind == LtiModel::Kind::first_order)
        return "fo:T=" + fmt(m.T) + ",gain=" + fmt(m.gain);
    return "so:wn=" + fmt(m.wn) + ",zeta=" + fmt(m.zeta) + ",gain=" + fmt(m.gain);
}

std::string nl_string(const Nonlinearity& n)
{
    switch (n.kind) {
    case Nonlinearity::Kind::identity: return "identity";
    case Nonlinearity::Kind::saturation: return "sat=" + fmt(n.p1);
    case Nonlinearity::Kind::cubic: return "cubic=" + fmt(n.p1) + "," + fmt(n.p2);
    case Nonlinearity::Kind::deadzone: return "deadzone=" + fmt(n.p1);
    }
    return {};
}

double lti_value(const LtiModel& m, double t)
{
    if (m.kind == LtiModel::Kind::first_order)
        return m.gain / m.T * std::exp(-t / m.T);
    const double wn = m.wn, z = m.zeta;
    if (z < 1.0) {
        const double wd = wn * std::sqrt(1.0 - z * z);
        return m.gain * wn / std::sqrt(1.0 - z * z) * std::exp(-z * wn * t) * std::sin(wd * t);
    }
    if (z == 1.0)
        return m.gain * wn * wn * t * std::exp(-wn * t);
    const double r = std::sqrt(z * z - 1.0);
    return m.gain * wn / (2.0 * r) * (std::exp(-(z - r) * wn * t) - std::exp(-(z + r) * wn * t));
}

// Slowest decay rate of the kernel envelope, 1/s.
double decay_rate(const LtiModel& m)
{
    if (m.kind == LtiModel::Kind::first_order)
        return 1.0 / m.T;
    if (m.zeta <= 1.0)
        return m.zeta * m.wn;
    return (m.zeta - std::sqrt(m.zeta * m.zeta - 1.0)) * m.wn;
}

void check_step(const LtiModel& m, double dt)
{
    if (m.kind == LtiModel::Kind::first_order) {
        if (!(dt < 0.5 * m.T))
            throw DiscretizationError("simulate: dt must be below T/2 for the first-order block");
    } else if (!(m.wn * dt < 0.5)) {
        throw DiscretizationError("simulate: wn * dt must be below 0.5 for the second-order block");
    }
}

std::vector<double> lti_kernel(const LtiModel& m, std::size_t max_len, double dt)
{
    // the critically damped and overdamped forms carry a t factor or a
    // difference of exponentials; the extra 40/rate covers that
    const double rate = decay_rate(m);
    const double span = (-std::log(kernel_cutoff) + 40.0) / rate;
    const double want = std::ceil(span / dt) + 1.0;
    const std::size_t len = want >= static_cast<double>(max_len) ? max_len : static_cast<std::size_t>(want);
    std::vector<double> h(len);
    for (std::size_t k = 0; k < len; ++k)
        h[k] = lti_value(m, static_cast<double>(k) * dt);
    return h;
}

Signal run_lti(const LtiModel& m, const Signal& x)
{
    check_step(m, x.dt());
    return convolve_direct(x, lti_kernel(m, x.size(), x.dt()));
}

Signal map_nl(const Nonlinearity& n, const Signal& x)
{
    std::vector<double> v(x.samples());
    for (auto& s : v)
        s = n(s);
    return Signal(std::move(v), x.dt(), x.t0());
}

} // namespace

double Nonlinearity::operator()(double v) const
{
    switch (kind) {
    case Kind::identity: return v;
    case Kind::saturation: return std::clamp(v, -p1, p1);
    case Kind::cubic: return p1 * v + p2 * v * v * v;
    case Kind::deadzone:
        if (v > p1)
            return v - p1;
        if (v < -p1)
            return v + p1;
        return 0.0;
    }
    return v;
}

void SystemModel::validate() const
{
    if (lti.kind == LtiModel::Kind::first_order) {
        if (!(lti.T > 0.0) || !std::isfinite(lti.T))
            throw ParameterError("model: T must be > 0");
    } else {
        if (!(lti.wn > 0.0) || !std::isfinite(lti.wn))
            throw ParameterError("model: wn must be > 0");
        if (!(lti.zeta > 0.0) || !std::isfinite(lti.zeta))
            throw ParameterError("model: zeta must be > 0");
    }
    if (!std::isfinite(lti.gain))
        throw ParameterError("model: gain must be finite");
    if (nl.kind == Nonlinearity::Kind::saturation && !(nl.p1 > 0.0))
        throw ParameterError("model: saturation limit must be > 0");
    if (nl.kind == Nonlinearity::Kind::deadzone && !(nl.p1 >= 0.0))
        throw ParameterError("model: deadzone width must be >= 0");
    if (!std::isfinite(nl.p1) || !std::isfinite(nl.p2))
        throw ParameterError("model: non-finite nonlinearity parameter");
}

SystemModel parse_model(const std::string& text)
{
    SystemModel m;
    auto split_bar = [&](const std::string& body) {
        const auto bar = body.find('|');
        if (bar == std::string::npos || body.find('|', bar + 1) != std::string::npos)
            throw ParseError("model: cascade needs exactly one '|' in '" + text + "'");
        return std::make_pair(body.substr(0, bar), body.substr(bar + 1));
    };
    if (text.rfind("hammerstein:", 0) == 0) {
        auto [nl, lti] = split_bar(text.substr(12));
        m = SystemModel::hammerstein(parse_nl(nl), parse_lti(lti));
    } else if (text.rfind("wiener:", 0) == 0) {
        auto [lti, nl] = split_bar(text.substr(7));
        m = SystemModel::wiener(parse_lti(lti), parse_nl(nl));
    } else {
        m = SystemModel::linear(parse_lti(text));
    }
    m.validate();
    return m;
}

std::string to_string(const SystemModel& m)
{
    switch (m.variant) {
    case SystemModel::Variant::lti: return lti_string(m.lti);
    case SystemModel::Variant::hammerstein: return "hammerstein:" + nl_string(m.nl) + "|" + lti_string(m.lti);
    case SystemModel::Variant::wiener: return "wiener:" + lti_string(m.lti) + "|" + nl_string(m.nl);
    }
    return {};
}

std::vector<double> impulse_response(const SystemModel& m, std::size_t n_lags, double dt)
{
    m.validate();
    if (m.variant != SystemModel::Variant::lti)
        throw UnsupportedError("impulse_response: model is not linear");
    if (!(dt > 0.0))
        throw ParameterError("impulse_response: dt must be > 0");
    std::vector<double> h(n_lags);
    for (std::size_t k = 0; k < n_lags; ++k)
        h[k] = lti_value(m.lti, static_cast<double>(k) * dt);
    return h;
}

Signal simulate(const SystemModel& m, const Signal& x)
{
    m.validate();
    switch (m.variant) {
    case SystemModel::Variant::lti: return run_lti(m.lti, x);
    case SystemModel::Variant::hammerstein: check_step(m.lti, x.dt()); return run_lti(m.lti, map_nl(m.nl, x));
    case SystemModel::Variant::wiener: return map_nl(m.nl, run_lti(m.lti, x));
    }
    return x;
}

SystemClass classify(const SystemModel& m, InputKind input)
{
    SystemClass c;
    c.alpha = 1;
    c.beta = input == InputKind::stochastic ? 1 : 0;
    c.gamma = (m.variant != SystemModel::Variant::lti && m.nl.kind != Nonlinearity::Kind::identity) ? 1 : 0;
    c.delta = 1;
    return c;
}

std::string to_string(const SystemClass& c)
{
    return "<" + std::to_string(c.alpha) + std::to_string(c.beta) + std::to_string(c.gamma)
        + std::to_string(c.delta) + ">";
}

} // namespace wavid
