#pragma once

#include "spa/netlist.hpp"

namespace spa {

// Normalized low-pass prototype coefficients for the two-pole equiripple
// matching network (ripple 0.1 dB, n = 2, 20 dB gain).
struct chebyshev_prototype {
    double g1 = 0.0, g2 = 0.0, g3 = 0.0;

    static chebyshev_prototype default_table();
    void validate() const;
};

struct synthesis_spec {
    double f0 = 0.0;       // Hz, band center
    double w = 0.0;        // fractional bandwidth, 0 < w < 1
    double z0 = 50.0;      // ohm
    double cc = 0.0;       // F, port coupling capacitor
    double l_array = 0.0;  // H
    chebyshev_prototype prototype = chebyshev_prototype::default_table();

    void validate() const;
};

struct matching_network_values {
    double l_array = 0.0;  // H
    double l2 = 0.0;       // H
    double cc = 0.0;       // F
    double c12 = 0.0;      // F
    double c1 = 0.0;       // F
    double c2 = 0.0;       // F
};

struct pump_filter_values {
    double l3 = 0.0, l4 = 0.0;            // H
    double c3 = 0.0, c4 = 0.0, c34 = 0.0; // F
};

struct corenorm_result {
    matching_network_values values;
    int iterations = 0;
};

matching_network_values synthesize_matching(const synthesis_spec& spec);

// Capacitively coupled two-shunt-resonator bandpass between z0 ports.
pump_filter_values synthesize_pump_filter(double center_hz, double passband_hz, double z0);

// Fixed point of {l_array_eff = l_array + l4; resynthesize}.
corenorm_result corenormalize(const synthesis_spec& spec, const pump_filter_values& filt,
                              double tol, int max_iter);

// Ladder from the signal port to the array: series Cc, shunt C2, shunt L2,
// series C12, shunt C1. The array termination is applied separately.
ladder_network matching_ladder(const matching_network_values& v, double z0);

// Pump filter ladder between z0 ports: shunt (C3 || L3), series C34,
// shunt (C4 || L4).
ladder_network pump_filter_ladder(const pump_filter_values& v, double z0);

// Physical negative-resistance magnitude corresponding to the normalized
// design termination z0/g3: the prototype load scaled to the impedance level
// of the array pole, R_p = Z1 * g1 / w with Z1 = omega0 * l_array.
double design_negative_resistance(const synthesis_spec& spec);

// Real part of the environment impedance the array sees at band center,
// R_env = Z1 * g1 / (w * g3); the gain formula uses R_p and R_env.
double environment_resistance(const synthesis_spec& spec);

// Maximum gain |(R_p + R)/(R_p - R)|^2 in dB for termination magnitude r_p
// against environment resistance r_env.
double max_gain_db(double r_p, double r_env);

}  // namespace spa
