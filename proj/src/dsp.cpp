#include "spa/dsp.hpp"

#include <cmath>
#include <numbers>

namespace spa {

std::vector<biquad> butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz) {
    if (order < 1) throw validation_error("filter order must be >= 1");
    if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 0.0))
        throw validation_error("cutoff and sample rate must be positive");
    if (!(cutoff_hz < 0.5 * sample_rate_hz))
        throw validation_error("cutoff must be below Nyquist");

    // Prewarped analog cutoff mapped through s = K (z-1)/(z+1); only the
    // ratio lambda = K / omega_c enters the normalized prototype.
    double lambda = 1.0 / std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

    std::vector<biquad> sections;
    int pairs = order / 2;
    for (int k = 1; k <= pairs; ++k) {
        // Conjugate pole pair of the unit-circle Butterworth prototype:
        // s^2 + a1 s + 1 with a1 = 2 sin(theta_k).
        double a1 = 2.0 * std::sin(std::numbers::pi * (2.0 * k - 1.0) / (2.0 * order));
        double d0 = lambda * lambda + a1 * lambda + 1.0;
        biquad s;
        s.b0 = 1.0 / d0;
        s.b1 = 2.0 / d0;
        s.b2 = 1.0 / d0;
        s.a1 = (2.0 - 2.0 * lambda * lambda) / d0;
        s.a2 = (lambda * lambda - a1 * lambda + 1.0) / d0;
        sections.push_back(s);
    }
    if (order % 2 == 1) {
        double d0 = lambda + 1.0;
        biquad s;
        s.b0 = 1.0 / d0;
        s.b1 = 1.0 / d0;
        s.b2 = 0.0;
        s.a1 = (1.0 - lambda) / d0;
        s.a2 = 0.0;
        sections.push_back(s);
    }
    return sections;
}

std::vector<complex> sos_filter(const std::vector<biquad>& sections,
                                const std::vector<complex>& x) {
    std::vector<complex> y = x;
    for (const auto& s : sections) {
        complex z1{0.0, 0.0}, z2{0.0, 0.0};
        for (auto& v : y) {
            complex in = v;
            complex out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

}  // namespace spa
