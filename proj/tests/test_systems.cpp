#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wavid/error.hpp"
#include "wavid/signals.hpp"
#include "wavid/systems.hpp"

using namespace wavid;

namespace {

constexpr double pi = std::numbers::pi;

Signal noise(std::size_t n, double dt, std::uint64_t seed)
{
    return generate_stochastic({Distribution::gaussian(0.0, 1.0), n, dt, seed});
}

double rel_diff(const Signal& a, const Signal& b) { return oracle::rel_l2(a.samples(), b.samples()); }

} // namespace

TEST(ImpulseResponse, FirstOrderClosedForm)
{
    const auto h = impulse_response(SystemModel::linear(LtiModel::first_order(0.05, 2.0)), 100, 0.001);
    for (std::size_t k = 0; k < h.size(); ++k)
        EXPECT_NEAR(h[k], oracle::first_order_h(0.05, 2.0, k * 0.001), 1e-12 * h[0]);
    EXPECT_DOUBLE_EQ(h[0], 40.0);
}

TEST(ImpulseResponse, UnderdampedClosedFormAndZeroCrossings)
{
    const double wn = 50.0, zeta = 0.2, dt = 1e-4;
    const auto h = impulse_response(SystemModel::linear(LtiModel::second_order(wn, zeta, 1.5)), 4000, dt);
    for (std::size_t k = 0; k < h.size(); ++k)
        EXPECT_NEAR(h[k], oracle::second_order_h(wn, zeta, 1.5, k * dt), 1e-10);
    EXPECT_EQ(h[0], 0.0);
    // sign changes land at multiples of pi / wd
    const double half = pi / (wn * std::sqrt(1.0 - zeta * zeta));
    std::size_t crossings = 0;
    for (std::size_t k = 1; k < h.size(); ++k)
        if (h[k - 1] * h[k] < 0.0) {
            ++crossings;
            const double t = k * dt;
            EXPECT_NEAR(std::fmod(t + 0.5 * dt, half), 0.0, 2 * dt);
        }
    EXPECT_EQ(crossings, static_cast<std::size_t>(std::floor(3999 * dt / half)));
}

TEST(ImpulseResponse, CriticalAndOverdampedForms)
{
    const double wn = 10.0, dt = 0.001;
    const auto hc = impulse_response(SystemModel::linear(LtiModel::second_order(wn, 1.0, 1.0)), 500, dt);
    const auto ho = impulse_response(SystemModel::linear(LtiModel::second_order(wn, 2.0, 1.0)), 500, dt);
    const double r = std::sqrt(3.0);
    for (std::size_t k = 0; k < 500; ++k) {
        const double t = k * dt;
        EXPECT_NEAR(hc[k], wn * wn * t * std::exp(-wn * t), 1e-12);
        EXPECT_NEAR(ho[k], wn / (2 * r) * (std::exp(-(2 - r) * wn * t) - std::exp(-(2 + r) * wn * t)), 1e-12);
        EXPECT_GE(hc[k], 0.0);
        EXPECT_GE(ho[k], 0.0);
    }
    // near-critical underdamped approaches the critical form
    const auto hu = impulse_response(SystemModel::linear(LtiModel::second_order(wn, 1.0 - 1e-7, 1.0)), 500, dt);
    for (std::size_t k = 0; k < 500; ++k)
        EXPECT_NEAR(hu[k], hc[k], 1e-4 * wn);
}

TEST(ImpulseResponse, UnitDcGain)
{
    for (const auto& m : {LtiModel::first_order(0.02, 1.0), LtiModel::second_order(40.0, 0.3, 1.0),
                          LtiModel::second_order(40.0, 1.0, 1.0), LtiModel::second_order(40.0, 3.0, 1.0)}) {
        const double dt = 1e-5;
        const auto h = impulse_response(SystemModel::linear(m), 200000, dt);
        double area = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k)
            area += (k == 0 ? 0.5 : 1.0) * h[k] * dt;
        EXPECT_NEAR(area, 1.0, 1e-3);
    }
}

TEST(ImpulseResponse, GainZeroAndNonlinearModels)
{
    for (double v : impulse_response(SystemModel::linear(LtiModel::first_order(0.1, 0.0)), 10, 0.01))
        EXPECT_EQ(v, 0.0);
    EXPECT_THROW(impulse_response(parse_model("hammerstein:sat=1|fo:T=0.1"), 10, 0.01), UnsupportedError);
    EXPECT_THROW(impulse_response(parse_model("wiener:fo:T=0.1|identity"), 10, 0.01), UnsupportedError);
    EXPECT_THROW(impulse_response(parse_model("fo:T=0.1"), 10, 0.0), ParameterError);
}

TEST(Simulate, IdentityCascadesMatchLinearModel)
{
    const auto x = noise(1000, 0.001, 3);
    const auto lin = simulate(parse_model("so:wn=60,zeta=0.4"), x);
    EXPECT_EQ(simulate(parse_model("hammerstein:identity|so:wn=60,zeta=0.4"), x).samples(), lin.samples());
    EXPECT_EQ(simulate(parse_model("wiener:so:wn=60,zeta=0.4|identity"), x).samples(), lin.samples());
}

TEST(Simulate, SaturationWithWideLimitIsLinear)
{
    const auto x = noise(1000, 0.001, 4);
    const auto lin = simulate(parse_model("fo:T=0.01,gain=2"), x);
    EXPECT_EQ(simulate(parse_model("hammerstein:sat=1e6|fo:T=0.01,gain=2"), x).samples(), lin.samples());
    EXPECT_EQ(simulate(parse_model("wiener:fo:T=0.01,gain=2|sat=1e6"), x).samples(), lin.samples());
}

TEST(Simulate, MatchesConvolutionWithSampledKernel)
{
    const double dt = 0.001;
    const auto x = noise(800, dt, 5);
    const auto m = parse_model("so:wn=80,zeta=0.1,gain=0.5");
    const auto y = simulate(m, x);
    const auto ref = oracle::nested_convolution(x.samples(), impulse_response(m, 800, dt), dt);
    EXPECT_LE(oracle::rel_l2(y.samples(), ref), 1e-12);
}

TEST(Simulate, PropertySuperposition)
{
    oracle::Gen g(71);
    const double dt = 0.001;
    for (const char* spec : {"fo:T=0.02", "so:wn=100,zeta=0.2,gain=3", "so:wn=40,zeta=1.5"}) {
        const auto m = parse_model(spec);
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t n = g.size(50, 600);
            const auto a = g.reals(n), b = g.reals(n);
            const double ca = g.uniform(-2, 2), cb = g.uniform(-2, 2);
            std::vector<double> mix(n);
            for (std::size_t i = 0; i < n; ++i)
                mix[i] = ca * a[i] + cb * b[i];
            const auto ya = simulate(m, Signal(a, dt)), yb = simulate(m, Signal(b, dt));
            std::vector<double> expect(n);
            for (std::size_t i = 0; i < n; ++i)
                expect[i] = ca * ya[i] + cb * yb[i];
            EXPECT_LE(oracle::rel_l2(simulate(m, Signal(mix, dt)).samples(), expect), 1e-10) << spec;
        }
    }
}

TEST(Simulate, CubicBreaksSuperposition)
{
    const double dt = 0.001;
    const auto a = noise(1000, dt, 6), b = noise(1000, dt, 7);
    std::vector<double> mix(1000);
    for (std::size_t i = 0; i < 1000; ++i)
        mix[i] = a[i] + b[i];
    const auto m = parse_model("hammerstein:cubic=1,0.5|fo:T=0.01");
    const auto ya = simulate(m, a), yb = simulate(m, b);
    std::vector<double> sum(1000);
    for (std::size_t i = 0; i < 1000; ++i)
        sum[i] = ya[i] + yb[i];
    EXPECT_GT(oracle::rel_l2(simulate(m, Signal(mix, dt)).samples(), sum), 0.01);
}

TEST(Simulate, WienerAppliesNonlinearityAfterFilter)
{
    const double dt = 0.001;
    const auto x = noise(500, dt, 8);
    const auto lin = simulate(parse_model("fo:T=0.01"), x);
    const auto w = simulate(parse_model("wiener:fo:T=0.01|deadzone=0.3"), x);
    const auto nl = Nonlinearity::deadzone(0.3);
    for (std::size_t i = 0; i < x.size(); ++i)
        EXPECT_EQ(w[i], nl(lin[i]));
    EXPECT_GT(rel_diff(w, lin), 0.01);
}

TEST(Simulate, DiscretizationGuards)
{
    const Signal x(std::vector<double>(64, 1.0), 0.01);
    EXPECT_THROW(simulate(parse_model("fo:T=0.02"), x), DiscretizationError);
    EXPECT_NO_THROW(simulate(parse_model("fo:T=0.021"), x));
    EXPECT_THROW(simulate(parse_model("so:wn=50,zeta=0.5"), x), DiscretizationError);
    EXPECT_NO_THROW(simulate(parse_model("so:wn=49,zeta=0.5"), x));
    EXPECT_THROW(simulate(parse_model("hammerstein:sat=1|fo:T=0.01"), x), DiscretizationError);
    EXPECT_THROW(simulate(parse_model("wiener:so:wn=100,zeta=0.5|sat=1"), x), DiscretizationError);
}

TEST(Nonlinearity, Values)
{
    EXPECT_EQ(Nonlinearity::identity()(3.5), 3.5);
    EXPECT_EQ(Nonlinearity::saturation(1.0)(3.0), 1.0);
    EXPECT_EQ(Nonlinearity::saturation(1.0)(-3.0), -1.0);
    EXPECT_EQ(Nonlinearity::saturation(1.0)(0.25), 0.25);
    EXPECT_EQ(Nonlinearity::cubic(2.0, 0.5)(2.0), 8.0);
    EXPECT_EQ(Nonlinearity::deadzone(0.5)(0.4), 0.0);
    EXPECT_EQ(Nonlinearity::deadzone(0.5)(2.0), 1.5);
    EXPECT_EQ(Nonlinearity::deadzone(0.5)(-2.0), -1.5);
}

TEST(Classify, Examples)
{
    EXPECT_EQ(to_string(classify(parse_model("fo:T=1"), InputKind::deterministic)), "<1001>");
    EXPECT_EQ(to_string(classify(parse_model("fo:T=1"), InputKind::stochastic)), "<1101>");
    EXPECT_EQ(to_string(classify(parse_model("hammerstein:sat=1|fo:T=1"), InputKind::stochastic)), "<1111>");
    EXPECT_EQ(to_string(classify(parse_model("wiener:so:wn=1,zeta=0.5|cubic=1,1"), InputKind::deterministic)),
              "<1011>");
    EXPECT_EQ(to_string(classify(parse_model("hammerstein:identity|fo:T=1"), InputKind::deterministic)), "<1001>");
}

TEST(ModelGrammar, RoundTrips)
{
    for (const char* s : {"fo:T=0.5,gain=2", "so:wn=50,zeta=0.2,gain=1", "hammerstein:sat=0.5|fo:T=0.1,gain=1",
                          "hammerstein:cubic=1,0.25|so:wn=3,zeta=1,gain=-2", "wiener:fo:T=1,gain=1|deadzone=0",
                          "wiener:so:wn=7.5,zeta=2,gain=1|identity"}) {
        const auto m = parse_model(s);
        EXPECT_EQ(to_string(m), s);
        EXPECT_EQ(to_string(parse_model(to_string(m))), to_string(m));
    }
    const auto m = parse_model("so:gain=3,zeta=0.1,wn=20");
    EXPECT_EQ(m.lti.wn, 20.0);
    EXPECT_EQ(m.lti.zeta, 0.1);
    EXPECT_EQ(m.lti.gain, 3.0);
    EXPECT_EQ(parse_model("fo:T=2").lti.gain, 1.0);
}

TEST(ModelGrammar, Rejects)
{
    for (const char* s : {"", "fo", "fo:T", "fo:T=abc", "fo:T=1,T=2", "fo:T=1,wn=2", "so:wn=1", "xx:T=1",
                          "hammerstein:sat=1", "hammerstein:sat=1|fo:T=1|fo:T=1", "hammerstein:foo|fo:T=1",
                          "wiener:fo:T=1|cubic=1", "fo:T=1x", "fo:T=1,gain=inf"})
        EXPECT_THROW(parse_model(s), ParseError) << s;
    for (const char* s : {"fo:T=0", "fo:T=-1", "so:wn=0,zeta=1", "so:wn=1,zeta=0", "hammerstein:sat=0|fo:T=1",
                          "wiener:fo:T=1|deadzone=-1"})
        EXPECT_THROW(parse_model(s), ParameterError) << s;
}
