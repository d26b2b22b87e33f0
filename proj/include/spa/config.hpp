#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spa/gain.hpp"
#include "spa/imd.hpp"
#include "spa/readout.hpp"
#include "spa/synthesis.hpp"

namespace spa {

struct gain_options {
    double f_lo_hz = 8.0e9;
    double f_hi_hz = 10.0e9;
    std::size_t points = 2001;
    double ripple_budget_db = 1.0;
    double gain_target_db = 20.0;
    double pump_lo_hz = 0.0;   // pump sweep bounds (--sweep-pump)
    double pump_hi_hz = 0.0;
    std::size_t pump_points = 0;
    double stark_coeff_per_w = 0.0;
    std::vector<double> input_powers_dbm;  // --compression sweep
};

struct imd_options {
    tone_set tones;
    int max_order = 5;
    double band_lo_hz = 8.0e9;
    double band_hi_hz = 10.0e9;
    double a3 = 0.0;
    double a5 = 0.0;
    std::vector<readout_channel> channels;
    double sweep_lo_dbm = -140.0;
    double sweep_hi_dbm = -100.0;
    std::size_t sweep_points = 21;
};

struct readout_options {
    sim_request request;            // systems, drives, eta, duration, timestep, seed, n_traj
    double filter_cutoff_hz = 10e6;
    int filter_order = 4;
    double g_spa_db = 20.0;         // noise-budget inputs
    double nvr_db = 8.0;
    double eta_corr = 0.38;
};

// Whole-project configuration: one JSON file, one section per module.
// Unknown keys anywhere are rejected. Frequencies named *_hz are cyclic
// (rates like kappa are converted to rad/s internally).
struct project_config {
    std::uint64_t seed = 1;
    std::optional<synthesis_spec> synthesis;
    struct pump_filter_spec {
        double center_hz = 0.0;
        double passband_hz = 0.0;
        double z0 = 50.0;
    };
    std::optional<pump_filter_spec> pump_filter;
    std::optional<pumped_array_params> pump;
    gain_options gain;
    std::optional<imd_options> imd;
    std::optional<readout_options> readout;
    std::string output_dir = "out";

    // Parses, applies dotted-path overrides ("gain.ripple_budget_db=1.0"),
    // validates the schema.
    static project_config from_json(const std::string& text,
                                    const std::vector<std::string>& overrides = {});
    static project_config load(const std::string& path,
                               const std::vector<std::string>& overrides = {});
};

}  // namespace spa
