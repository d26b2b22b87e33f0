#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spa/gain.hpp"
#include "spa/netlist.hpp"

namespace spa {

struct tone {
    double freq_hz = 0.0;
    double power_dbm = 0.0;  // at amplifier input
};

struct tone_set {
    std::vector<tone> tones;
    double pump_freq = 0.0;

    void validate() const;
};

// Integer label (n_p, n_1, ..., n_k) of a mixing product at
// n_p*w_p + sum n_i*w_i. Order counts signal photons only: sum |n_i|.
struct product_label {
    int n_p = 0;
    std::vector<int> n_sig;

    int order() const;
};

struct mixing_product {
    double freq_hz = 0.0;
    int order = 0;               // lowest order among contributing labels
    product_label label;         // lowest-order label (lexicographic tiebreak)
    std::vector<product_label> aliases;  // other labels merged at this frequency
};

// All distinct positive-frequency products with order <= max_order and
// |n_p| <= 3 inside [band_lo, band_hi], deduplicated within 1 Hz, ascending.
std::vector<mixing_product> enumerate_products(const tone_set& t, int max_order,
                                               std::pair<double, double> band);

struct readout_channel {
    double freq_hz = 0.0;
    double acq_bw_hz = 0.0;
};

struct collision_entry {
    mixing_product product;
    std::size_t channel_index = 0;
    double detuning_hz = 0.0;
};

struct collision_report {
    std::vector<collision_entry> entries;
    double threshold_hz = 0.0;  // largest acquisition bandwidth scanned
};

collision_report collision_scan(const tone_set& t, const std::vector<readout_channel>& channels,
                                int max_order);

struct spectrum_line {
    double freq_hz = 0.0;
    double power_dbm = 0.0;
};

// Analytic multinomial expansion of y = x + a3 x^3 + a5 x^5 over the tones
// (a5 optional, default 0), each line scaled by the gain profile at its
// frequency when one is supplied. Powers are dBm into z0 = 50 ohm.
std::vector<spectrum_line> mixer_spectrum(const tone_set& t, double a3, double a5 = 0.0,
                                          const gain_profile* gain = nullptr);

struct power_law_fit {
    double slope = 0.0;
    double intercept_dbm = 0.0;  // value of the fitted line at P_in = 0 dBm
    double window_lo_dbm = 0.0;
    double window_hi_dbm = 0.0;
    double residual_db = 0.0;    // max |data - line| inside the window
};

struct power_sweep_row {
    double p_in_dbm = 0.0;
    double p_sig_dbm = 0.0;
    double p_im3_dbm = 0.0;
    std::optional<double> p_im5_dbm;  // optional fifth-order trace
};

struct power_law_result {
    power_law_fit signal;  // slope fixed to 1
    power_law_fit im3;     // slope fixed to 3
    double iip3_dbm = 0.0;
    std::optional<double> p1db_dbm;  // empty: compression not reached
    std::optional<double> iip5_dbm;  // always low-confidence when present
    bool iip5_low_confidence = true;
};

// Fixed-slope (1 and 3) fits over the largest low-power window with max
// residual < 0.5 dB; iip3 is the intersection abscissa.
power_law_result fit_power_laws(const std::vector<power_sweep_row>& sweep);

}  // namespace spa
