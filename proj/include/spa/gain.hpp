#pragma once

#include <optional>
#include <vector>

#include "spa/array_model.hpp"
#include "spa/synthesis.hpp"

namespace spa {

struct gain_profile {
    frequency_grid grid;
    std::vector<double> gain_db;
    std::vector<double> phase_deg;
};

struct flat_top_metrics {
    double peak_db = 0.0;
    double center_hz = 0.0;     // midpoint of the ripple band
    double bw_3db_hz = 0.0;     // contiguous band around the peak
    double bw_ripple_hz = 0.0;  // widest contiguous band with max-min <= budget
    double ripple_db = 0.0;     // max-min within that band
};

// Reflection gain of the matching network terminated in the pumped array.
// The three-wave process amplifies signal and idler together; the reported
// gain is the dB mean of the reflection at the signal frequency and at the
// idler frequency pump_freq - f (engineering approximation for detuned
// pumps), and the phase is the signal-reflection phase.
gain_profile evaluate_gain(const matching_network_values& net, const pumped_array_params& array,
                           const frequency_grid& grid);

// Summary metrics. The ripple band is the widest window inside the 3 dB band
// that contains the peak sample; ties break toward the lower-frequency band.
flat_top_metrics compute_flat_top_metrics(const gain_profile& p, double ripple_budget_db);

struct pump_sweep_point {
    double pump_freq = 0.0;
    bool attained = false;     // peak gain held at target +- 0.1 dB
    double c3_phi_p = 0.0;     // pump strength used (0 when not attained)
    flat_top_metrics metrics;  // valid only when attained
};

// For each pump frequency, re-centers the model and adjusts c3_phi_p to hold
// the peak gain at gain_target_db +- 0.1 dB, then reports flat-top metrics.
std::vector<pump_sweep_point> tunable_band_sweep(const matching_network_values& net,
                                                 const pumped_array_params& array,
                                                 const std::vector<double>& pump_freqs,
                                                 double gain_target_db,
                                                 const frequency_grid& grid,
                                                 double ripple_budget_db = 1.0);

struct compression_result {
    std::vector<double> input_powers_w;
    std::vector<gain_profile> profiles;       // one per input power
    std::vector<double> p1db_dbm;             // per grid point; NaN = not reached
    std::vector<unsigned char> diverged;      // per grid point fixed-point failure flag
};

// Self-consistent gain vs input power with the Stark-shift inductance
// renormalization. Circulating power is estimated from the small-signal
// reflection, P_circ = |Gamma|^2 * P_in (first-order approximation).
compression_result compression_sweep(const matching_network_values& net,
                                     const pumped_array_params& array, double stark_coeff_per_w,
                                     const std::vector<double>& input_powers_w,
                                     const frequency_grid& grid);

}  // namespace spa
