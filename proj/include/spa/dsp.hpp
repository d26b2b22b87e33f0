#pragma once

#include <vector>

#include "spa/netlist.hpp"

namespace spa {

// Second-order IIR section, normalized so a0 = 1.
struct biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

// Digital Butterworth low-pass via bilinear transform with prewarping at the
// cutoff, factored into second-order sections (plus one first-order section
// for odd orders). Magnitude at cutoff is -3.01 dB by construction.
std::vector<biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz);

// Forward filtering (direct form II transposed) of a complex sequence; the
// real coefficients act identically on I and Q.
std::vector<complex> sos_filter(const std::vector<biquad>& sections,
                                const std::vector<complex>& x);

}  // namespace spa
