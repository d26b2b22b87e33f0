#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spa/dsp.hpp"
#include "spa/netlist.hpp"

namespace spa {

// One readout channel: resonator + qubit parameters. chi is the total
// dispersive shift (pull between g and e), split symmetrically +-chi/2.
struct dispersive_system {
    double readout_freq = 0.0;    // Hz
    double kappa = 0.0;           // rad/s, total linewidth
    double kappa_ext = 0.0;       // rad/s, external coupling
    double chi = 0.0;             // rad/s
    double t1 = 0.0;              // s
    double drive_detuning = 0.0;  // rad/s, drive relative to bare resonator

    void validate() const;
};

struct pointer_pair {
    complex alpha_g, alpha_e;
};

// Steady-state pointer states for drive amplitude in sqrt(photons/s):
// alpha_{g/e} = sqrt(kappa_ext) * drive / (kappa/2 + i(Delta -+ chi/2)).
pointer_pair pointer_states(const dispersive_system& s, double drive_amp);

// Measurement-induced dephasing rate (kappa/2)|alpha_g - alpha_e|^2.
double dephasing_rate(const dispersive_system& s, double drive_amp);

// Steady-state measurement rate 2 eta kappa_ext |alpha_g - alpha_e|^2.
double measurement_rate(const dispersive_system& s, double drive_amp, double eta);

struct efficiency_result {
    double eta = 0.0;
    bool condition_ok = true;  // false when kappa_ext < kappa (identity assumes equality)
};

// eta = M / (4 Gamma_phi); exact identity when kappa_ext = kappa.
efficiency_result efficiency(const dispersive_system& s, double drive_amp, double eta_in);

enum class qubit_state { g, e };

struct iq_record {
    double timestep = 0.0;
    std::vector<complex> samples;
};

// Spurious coherent tone added to every record; its phase flips by pi when
// channel 1 is prepared in |e> (intermodulation crosstalk mechanism).
// Amplitude is in sqrt(photons/s), same scale as sqrt(kappa_ext)*alpha.
struct injected_line {
    double freq_hz = 0.0;
    double amp = 0.0;
    double phase = 0.0;
};

struct sim_request {
    std::vector<dispersive_system> systems;
    std::vector<double> drive_amps;  // per channel, sqrt(photons/s)
    std::vector<double> eta;         // per channel measurement efficiency
    double duration = 0.0;           // s
    double timestep = 0.0;           // s
    std::uint64_t seed = 0;
    std::vector<injected_line> injected;
    std::size_t n_traj = 0;

    void validate() const;
};

// Heterodyne records for one joint preparation. Record model (documented
// calibration): r_n = sqrt(kappa_ext * dt) * alpha(t_n) + w_n with
// E|w_n|^2 = 1/eta, so the integrated SNR obeys
// SNR^2 = 2 eta kappa_ext |alpha_g - alpha_e|^2 tau in steady state.
// Qubit decay is a single e->g jump at rate 1/T1. Deterministic given seed.
std::vector<std::vector<iq_record>> simulate_records(const sim_request& req,
                                                     const std::vector<qubit_state>& prepared);

// Full multiplexed experiment: joint preparations all-g plus one prep per
// channel with that channel excited; records[prep][channel][trajectory].
struct mux_experiment {
    double timestep = 0.0;
    std::vector<std::vector<qubit_state>> preps;
    std::vector<std::vector<std::vector<iq_record>>> records;
};

mux_experiment simulate_experiment(const sim_request& req);

struct channel_stats {
    double fidelity = 0.0;
    double threshold = 0.0;  // on the matched-filter discriminant axis
    complex blob_mean_g, blob_mean_e;
    double var_g = 0.0, var_e = 0.0;  // discriminant-axis variances
    bool degenerate = false;          // blob separation < 0.1 sigma
};

struct fidelity_report {
    std::vector<channel_stats> channels;
    std::optional<double> eps12;  // crosstalk error, needs >= 2 channels
};

// Appendix-style pipeline: Butterworth low-pass (default order 4), matched
// envelope conj(mean_e - mean_g), integration, Gaussian fit, equal-likelihood
// threshold, assignment fidelities F_ii = [P(0|g) + P(1|e)]/2, and the
// crosstalk error eps12 = P(1_ch2 | ch1 = e) - P(1_ch2 | ch1 = g).
fidelity_report demodulate_and_classify(const mux_experiment& exp, double filter_cutoff_hz,
                                        int filter_order = 4);

struct noise_budget {
    double g_spa = 0.0;     // linear power gain
    double nvr = 0.0;       // linear noise visibility ratio
    double eta_corr = 0.0;
    double n_q = 0.5;       // photons, vacuum + zero-point
    double n_spa = 0.0;     // photons added by the amplifier
    double n_sys = 0.0;     // photons of following-chain noise
};

// Closed-form inversion: n_sys = G n_q/(eta_corr NVR) - n_q and
// n_spa = n_q (1/eta_corr - 1) - n_sys/G.
noise_budget noise_budget_solve(double g_spa_db, double nvr_db, double eta_corr);

// Inferred extra transmission loss between two channels, 10 log10(eta1/eta2).
double delta_a_db(double eta1, double eta2);

}  // namespace spa
