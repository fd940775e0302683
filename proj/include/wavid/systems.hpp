#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wavid/signals.hpp"

namespace wavid {

struct Nonlinearity {
    enum class Kind { identity, saturation, cubic, deadzone };

    Kind kind = Kind::identity;
    double p1 = 0.0; // limit, c1 or width
    double p2 = 0.0; // c3

    static Nonlinearity identity() { return {}; }
    static Nonlinearity saturation(double limit) { return {Kind::saturation, limit, 0.0}; }
    static Nonlinearity cubic(double c1, double c3) { return {Kind::cubic, c1, c3}; }
    static Nonlinearity deadzone(double width) { return {Kind::deadzone, width, 0.0}; }

    double operator()(double v) const;
};

struct LtiModel {
    enum class Kind { first_order, second_order };

    Kind kind = Kind::first_order;
    double T = 1.0;     // time constant, s
    double wn = 1.0;    // natural frequency, rad/s
    double zeta = 1.0;
    double gain = 1.0;

    static LtiModel first_order(double T, double gain) { return {Kind::first_order, T, 0.0, 0.0, gain}; }
    static LtiModel second_order(double wn, double zeta, double gain)
    {
        return {Kind::second_order, 0.0, wn, zeta, gain};
    }
};

struct SystemModel {
    enum class Variant { lti, hammerstein, wiener };

    Variant variant = Variant::lti;
    LtiModel lti;
    Nonlinearity nl;

    static SystemModel linear(const LtiModel& m) { return {Variant::lti, m, {}}; }
    static SystemModel hammerstein(const Nonlinearity& n, const LtiModel& m) { return {Variant::hammerstein, m, n}; }
    static SystemModel wiener(const LtiModel& m, const Nonlinearity& n) { return {Variant::wiener, m, n}; }

    void validate() const;
};

// Grammar:
//   model  := lti | "hammerstein:" nl "|" lti | "wiener:" lti "|" nl
//   lti    := "fo:T=" num ",gain=" num | "so:wn=" num ",zeta=" num ",gain=" num
//   nl     := "identity" | "sat=" num | "cubic=" num "," num | "deadzone=" num
// Keys inside fo/so may come in any order; gain defaults to 1.
SystemModel parse_model(const std::string& text);
std::string to_string(const SystemModel& m);

// Sampled analytic impulse response h_k = h(k dt).
std::vector<double> impulse_response(const SystemModel& m, std::size_t n_lags, double dt);

Signal simulate(const SystemModel& m, const Signal& x);

struct SystemClass {
    int alpha = 1;
    int beta = 0;
    int gamma = 0;
    int delta = 1;
};

enum class InputKind { deterministic, stochastic };

SystemClass classify(const SystemModel& m, InputKind input);
std::string to_string(const SystemClass& c);

} // namespace wavid
