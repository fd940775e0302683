#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wavid/cli.hpp"
#include "wavid/error.hpp"
#include "wavid/identify.hpp"
#include "wavid/io.hpp"
#include "wavid/signals.hpp"
#include "wavid/systems.hpp"
#include "wavid/wavelet.hpp"

namespace wavid::cli {
namespace {

// Bad flags, missing files and similar problems that map to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string config;
    std::string dist;
    std::size_t n = 0;
    double dt = 1.0;
    std::uint64_t seed = 0;
    std::string model;
    std::string wavelet = "morlet:6";
    std::string scales;
    std::string reg = "water:1e-3";
    std::size_t lags = 0;
    std::size_t bins = 32;
    std::string mode = "time";
    std::string with;
    std::string output;
    std::vector<std::string> inputs;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Signal load_signal(const std::string& path)
{
    std::istringstream in(slurp(path));
    try {
        return read_signal_csv(in);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// Outputs are staged in memory and written only after every computation has
// succeeded, so a failing run leaves no partial files behind.
class Staged {
public:
    void add(std::string path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }
    void commit() const
    {
        for (const auto& [path, content] : files_) {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out << content;
            if (!out)
                throw UsageError("cannot write '" + path + "'");
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

double strict_number(const std::string& text, const std::string& what)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || !std::isfinite(v))
        throw ParseError("bad " + what + " '" + text + "'");
    return v;
}

std::pair<double, double> number_pair(const std::string& text, const std::string& what)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ParseError(what + " needs two comma-separated numbers");
    return {strict_number(text.substr(0, comma), what), strict_number(text.substr(comma + 1), what)};
}

Distribution parse_dist(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    if (colon == std::string::npos)
        throw ParseError("--dist must be gauss:<m>,<s> or uniform:<lo>,<hi>");
    const auto [a, b] = number_pair(text.substr(colon + 1), "--dist");
    if (name == "gauss")
        return Distribution::gaussian(a, b);
    if (name == "uniform")
        return Distribution::uniform(a, b);
    throw ParseError("unknown distribution '" + name + "'");
}

ScaleGrid parse_scales(const std::string& text, std::size_t n, double dt)
{
    ScaleGrid g;
    if (text.empty()) {
        g.a_min = 2.0 * dt;
        g.a_max = static_cast<double>(n) * dt / 4.0;
        g.count = 64;
        g.validate();
        return g;
    }
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 4)
        throw ParseError("--scales must be <amin>:<amax>:<count>:<log|linear>");
    g.a_min = strict_number(parts[0], "a_min");
    g.a_max = strict_number(parts[1], "a_max");
    const double count = strict_number(parts[2], "scale count");
    if (count != std::floor(count) || count < 2 || count > 1e6)
        throw ParseError("scale count must be an integer >= 2");
    g.count = static_cast<std::size_t>(count);
    if (parts[3] == "log")
        g.spacing = ScaleGrid::Spacing::log;
    else if (parts[3] == "linear")
        g.spacing = ScaleGrid::Spacing::linear;
    else
        throw ParseError("scale spacing must be log or linear");
    g.validate();
    return g;
}

RegularizationPolicy parse_reg(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("--reg must be <water|tikhonov>:<level>");
    RegularizationPolicy r;
    const std::string kind = text.substr(0, colon);
    if (kind == "water")
        r.kind = RegularizationPolicy::Kind::water_level;
    else if (kind == "tikhonov")
        r.kind = RegularizationPolicy::Kind::tikhonov;
    else
        throw ParseError("unknown regularization '" + kind + "'");
    r.level = strict_number(text.substr(colon + 1), "regularization level");
    r.validate();
    return r;
}

std::size_t lags_or_default(std::size_t flag, std::size_t n)
{
    if (flag != 0)
        return flag;
    return std::max<std::size_t>(1, std::min<std::size_t>(n / 4, 512));
}

template <class F>
std::string render(F&& f)
{
    std::ostringstream os;
    f(os);
    return os.str();
}

int cmd_gen(const Flags& f)
{
    StochasticSpec spec;
    spec.distribution = parse_dist(f.dist);
    spec.length = f.n;
    spec.dt = f.dt;
    spec.seed = f.seed;
    const auto x = generate_stochastic(spec);
    Staged s;
    s.add(f.output, render([&](std::ostream& os) { write_signal_csv(os, x); }));
    s.commit();
    return ok;
}

int cmd_sim(const Flags& f)
{
    const auto model = parse_model(f.model);
    const auto x = load_signal(f.inputs.at(0));
    const auto y = simulate(model, x);
    Staged s;
    s.add(f.output, render([&](std::ostream& os) { write_signal_csv(os, y); }));
    s.commit();
    return ok;
}

int cmd_stats(const Flags& f, std::ostream& out)
{
    const auto x = load_signal(f.inputs.at(0));
    const std::size_t lags = std::min(lags_or_default(f.lags, x.size()), x.size() - 1);
    Staged s;
    auto corr_csv = [](const CorrelationFunction& r) {
        return render([&](std::ostream& os) {
            os << "lag,tau,value\n";
            for (std::size_t i = 0; i < r.lags.size(); ++i)
                os << r.lags[i] << ',' << format_double(static_cast<double>(r.lags[i]) * r.dt) << ','
                   << format_double(r.values[i]) << '\n';
        });
    };
    s.add(f.output + "_acf.csv", corr_csv(autocorrelation(x, lags)));
    if (!f.with.empty()) {
        const auto y = load_signal(f.with);
        s.add(f.output + "_ccf.csv", corr_csv(cross_correlation(x, y, lags)));
    }
    const auto psd = periodogram(x);
    s.add(f.output + "_psd.csv", render([&](std::ostream& os) {
        os << "frequency,power\n";
        for (const auto& p : psd)
            os << format_double(p.frequency) << ',' << format_double(p.power) << '\n';
    }));
    const auto hist = histogram(x, f.bins);
    s.add(f.output + "_hist.csv", render([&](std::ostream& os) {
        os << "lo,hi,count\n";
        for (const auto& b : hist)
            os << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
    }));
    const auto st = summary_stats(x);
    s.commit();
    out << "n=" << x.size() << "\ndt=" << format_double(x.dt()) << "\nmean=" << format_double(st.mean)
        << "\nvariance=" << format_double(st.variance) << "\nmin=" << format_double(st.min)
        << "\nmax=" << format_double(st.max) << "\nrms=" << format_double(st.rms) << '\n';
    return ok;
}

int cmd_cwt(const Flags& f)
{
    const auto w = MotherWavelet::parse(f.wavelet);
    const auto x = load_signal(f.inputs.at(0));
    const auto grid = parse_scales(f.scales, x.size(), x.dt());
    const auto surface = cwt(x, w, grid);
    Staged s;
    s.add(f.output, render([&](std::ostream& os) { write_surface(os, surface); }));
    s.commit();
    return ok;
}

int cmd_identify(const Flags& f, std::ostream& out)
{
    const auto w = MotherWavelet::parse(f.wavelet);
    const auto reg = parse_reg(f.reg);
    const auto x = load_signal(f.inputs.at(0));
    const auto y = load_signal(f.inputs.at(1));
    if (x.size() != y.size() || std::fabs(x.dt() - y.dt()) > 1e-12 * x.dt())
        throw ShapeError("input and output records differ in length or dt");
    const Signal yy(y.samples(), x.dt(), y.t0());
    const auto grid = parse_scales(f.scales, x.size(), x.dt());
    const auto itf = identify_itf(x, yy, w, grid, reg, lags_or_default(f.lags, x.size()));
    const auto report = restore_error(yy, reconstruct(x, itf, w, grid, ReconstructMode::time_domain));
    Staged s;
    s.add(f.output, render([&](std::ostream& os) { write_itf(os, itf, w); }));
    s.commit();

    std::vector<double> live;
    std::size_t dead = 0;
    for (std::size_t i = 0; i < itf.n_scales(); ++i) {
        if (itf.dead[i])
            ++dead;
        else
            live.push_back(itf.dispersion[i]);
    }
    std::sort(live.begin(), live.end());
    const double median = live.empty() ? 0.0 : live[live.size() / 2];
    const double worst = live.empty() ? 0.0 : live.back();
    out << "n_scales=" << itf.n_scales() << "\nn_lags=" << itf.n_lags << "\ndead_channels=" << dead
        << "\ndispersion_median=" << format_double(median) << "\ndispersion_max=" << format_double(worst)
        << "\nepsilon_rel=" << (report.epsilon_rel ? format_double(*report.epsilon_rel) : "undefined")
        << "\nepsilon_rms=" << format_double(report.epsilon_rms) << '\n';
    return ok;
}

int cmd_reconstruct(const Flags& f)
{
    ReconstructMode mode;
    if (f.mode == "time")
        mode = ReconstructMode::time_domain;
    else if (f.mode == "wavelet")
        mode = ReconstructMode::wavelet_domain;
    else
        throw ParseError("--mode must be time or wavelet");
    const auto x = load_signal(f.inputs.at(0));
    std::istringstream in(slurp(f.inputs.at(1)));
    MotherWavelet w = MotherWavelet::morlet();
    const auto itf = read_itf(in, &w);
    const Signal xx(x.samples(), itf.dt, x.t0());
    if (std::fabs(x.dt() - itf.dt) > 1e-9 * itf.dt)
        throw ShapeError("signal dt does not match the ITF surface");
    const auto y = reconstruct(xx, itf, w, infer_grid(itf.scales), mode);
    Staged s;
    s.add(f.output, render([&](std::ostream& os) { write_signal_csv(os, y); }));
    s.commit();
    return ok;
}

int cmd_error(const Flags& f, std::ostream& out)
{
    const auto y = load_signal(f.inputs.at(0));
    const auto yh = load_signal(f.inputs.at(1));
    if (std::fabs(y.dt() - yh.dt()) > 1e-9 * y.dt())
        throw ShapeError("records differ in dt");
    const auto r = restore_error(y, Signal(yh.samples(), y.dt(), yh.t0()));
    out << "epsilon_rel=" << (r.epsilon_rel ? format_double(*r.epsilon_rel) : "undefined") << '\n'
        << "epsilon_rms=" << format_double(r.epsilon_rms) << '\n';
    return ok;
}

int cmd_plot(const Flags& f)
{
    std::istringstream in(slurp(f.inputs.at(0)));
    const auto m = read_magnitudes(in);
    Staged s;
    s.add(f.output + ".ppm", render([&](std::ostream& os) { write_heatmap_ppm(os, m); }));
    s.add(f.output + ".csv", render([&](std::ostream& os) { write_magnitude_csv(os, m); }));
    s.commit();
    return ok;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path)
{
    std::istringstream in(slurp(path));
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        kv.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

bool names_option(const std::string& token, const CLI::Option& opt)
{
    for (const auto& l : opt.get_lnames())
        if (token == "--" + l || token.rfind("--" + l + "=", 0) == 0)
            return true;
    for (const auto& s : opt.get_snames())
        if (token.rfind("-" + s, 0) == 0 && token.rfind("--", 0) != 0)
            return true;
    return false;
}

// Appends config-file keys as flags unless the command line already sets them.
void merge_config(CLI::App& app, std::vector<std::string>& args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || args.empty())
        return;
    CLI::App* sub = app.get_subcommand_no_throw(args[0]);
    if (sub == nullptr)
        return;
    const auto original = args;
    for (const auto& [key, value] : read_config(path)) {
        std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr && key.size() == 1) {
            flag = "-" + key;
            opt = sub->get_option_no_throw(flag);
        }
        if (opt == nullptr || key == "config" || opt->get_positional())
            throw UsageError("config: unknown key '" + key + "' for " + args[0]);
        const bool given = std::any_of(original.begin() + 1, original.end(),
                                       [&](const std::string& t) { return names_option(t, *opt); });
        if (!given) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
}

} // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err)
{
    Flags f;
    CLI::App app{"wavid: wavelet-domain identification of impulse transient functions", "wavid"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "Flat 'key = value' file; command-line flags take precedence");
    };
    auto add_output = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("-o,--output", f.output, what)->required();
    };
    auto add_wavelet = [&](CLI::App* sub) {
        sub->add_option("--wavelet", f.wavelet, "morlet:<w0> | mhat | dog:<n> | paul:<m> | gauss:<n> | shannon")
            ->capture_default_str();
        sub->add_option("--scales", f.scales,
                        "<amin>:<amax>:<count>:<log|linear> in seconds (default 2dt:N*dt/4:64:log)");
    };

    auto* gen = app.add_subcommand("gen", "Generate a stochastic signal CSV");
    gen->add_option("--dist", f.dist, "gauss:<mean>,<stddev> | uniform:<lo>,<hi>")->required();
    gen->add_option("--n", f.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    gen->add_option("--dt", f.dt, "Sample interval, seconds")->capture_default_str();
    gen->add_option("--seed", f.seed, "Generator seed (std::mt19937_64)")->capture_default_str();
    add_output(gen, "Output CSV");
    add_config(gen);

    auto* sim = app.add_subcommand("sim", "Run an input CSV through a system model");
    sim->add_option("input", f.inputs, "Input signal CSV")->required()->expected(1);
    sim->add_option("--model", f.model,
                    "fo:T=<s>,gain=<g> | so:wn=<rad/s>,zeta=<z>,gain=<g> | hammerstein:<nl>|<lti> | "
                    "wiener:<lti>|<nl>; nl = identity | sat=<L> | cubic=<c1>,<c3> | deadzone=<w>")
        ->required();
    add_output(sim, "Output CSV");
    add_config(sim);

    auto* stats = app.add_subcommand("stats", "Summary statistics, correlations, periodogram, histogram");
    stats->add_option("input", f.inputs, "Signal CSV")->required()->expected(1);
    stats->add_option("--with", f.with, "Second signal CSV for the cross-correlation");
    stats->add_option("--lags", f.lags, "Maximum correlation lag (default min(N/4, 512))");
    stats->add_option("--bins", f.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
    add_output(stats, "Output prefix for _acf/_ccf/_psd/_hist CSVs");
    add_config(stats);

    auto* cw = app.add_subcommand("cwt", "Continuous wavelet transform to a wcs-v1 surface");
    cw->add_option("input", f.inputs, "Signal CSV")->required()->expected(1);
    add_wavelet(cw);
    add_output(cw, "Output surface file");
    add_config(cw);

    auto* ident = app.add_subcommand("identify", "Identify the ITF surface from input and output CSVs");
    ident->add_option("inputs", f.inputs, "Input CSV, output CSV")->required()->expected(2);
    add_wavelet(ident);
    ident->add_option("--reg", f.reg, "<water|tikhonov>:<level>")->capture_default_str();
    ident->add_option("--lags", f.lags, "ITF length in samples (default min(N/4, 512))");
    add_output(ident, "Output itf-v1 surface");
    add_config(ident);

    auto* recon = app.add_subcommand("reconstruct", "Predict the output from an input CSV and an ITF surface");
    recon->add_option("inputs", f.inputs, "Input CSV, itf-v1 surface")->required()->expected(2);
    recon->add_option("--mode", f.mode, "time (averaged kernel) | wavelet (per-channel)")->capture_default_str();
    add_output(recon, "Output CSV");
    add_config(recon);

    auto* errc = app.add_subcommand("error", "Restore error between a reference and a reconstructed CSV");
    errc->add_option("inputs", f.inputs, "Reference CSV, reconstructed CSV")->required()->expected(2);
    add_config(errc);

    auto* plot = app.add_subcommand("plot", "Render |surface| as a P3 pixmap plus a magnitude CSV");
    plot->add_option("input", f.inputs, "wcs-v1 or itf-v1 surface")->required()->expected(1);
    add_output(plot, "Output prefix for .ppm and .csv");
    add_config(plot);

    std::vector<std::string> args = args_in;
    try {
        merge_config(app, args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    } catch (const std::exception& e) {
        err << "wavid: " << e.what() << '\n';
        return usage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(f);
        if (sim->parsed())
            return cmd_sim(f);
        if (stats->parsed())
            return cmd_stats(f, out);
        if (cw->parsed())
            return cmd_cwt(f);
        if (ident->parsed())
            return cmd_identify(f, out);
        if (recon->parsed())
            return cmd_reconstruct(f);
        if (errc->parsed())
            return cmd_error(f, out);
        if (plot->parsed())
            return cmd_plot(f);
    } catch (const UsageError& e) {
        err << "wavid: " << e.what() << '\n';
        return usage;
    } catch (const ParseError& e) {
        err << "wavid: " << e.what() << '\n';
        return usage;
    } catch (const ParameterError& e) {
        err << "wavid: " << e.what() << '\n';
        return usage;
    } catch (const ShapeError& e) {
        err << "wavid: " << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        err << "wavid: numerical error: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        err << "wavid: " << e.what() << '\n';
        return numerical;
    }
    err << "wavid: no subcommand\n";
    return usage;
}

} // namespace wavid::cli
