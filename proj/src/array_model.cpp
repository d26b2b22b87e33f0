#include "spa/array_model.hpp"

#include <cmath>

namespace spa {

void pumped_array_params::validate() const {
    if (!(l_array > 0.0)) throw validation_error("l_array must be positive");
    if (!(c3_phi_p >= 0.0)) throw validation_error("c3_phi_p must be nonnegative");
    if (!(z0 > 0.0)) throw validation_error("z0 must be positive");
    if (!(c1 > 0.0)) throw validation_error("c1 must be positive");
    if (!(pump_freq > 0.0)) throw validation_error("pump_freq must be positive");
}

complex array_admittance(const pumped_array_params& p, double omega_s) {
    p.validate();
    if (!(omega_s > 0.0)) throw validation_error("array_admittance requires omega_s > 0");
    complex y{0.0, -1.0 / (omega_s * p.l_array)};
    if (p.c3_phi_p > 0.0)
        y += complex{-(p.z0 * p.c1) / (p.l_array * p.c3_phi_p * p.c3_phi_p), 0.0};
    return y;
}

double negative_resistance_of(const pumped_array_params& p) {
    p.validate();
    if (!(p.c3_phi_p > 0.0)) throw validation_error("pump is off; no negative resistance");
    return p.l_array * p.c3_phi_p * p.c3_phi_p / (p.z0 * p.c1);
}

double c3_phi_p_for_rp(double r_p, double l_array, double z0, double c1) {
    if (!(r_p > 0.0) || !(l_array > 0.0) || !(z0 > 0.0) || !(c1 > 0.0))
        throw validation_error("c3_phi_p_for_rp requires positive arguments");
    return std::sqrt(r_p * z0 * c1 / l_array);
}

negative_resistance rp_for_target_gain(double g_target_db, double z0, gain_branch branch) {
    if (!(g_target_db > 0.0))
        throw validation_error("target gain must be positive dB (no finite solution at 0 dB)");
    if (!(z0 > 0.0)) throw validation_error("z0 must be positive");
    double g = std::pow(10.0, g_target_db / 20.0);  // |(R+z0)/(R-z0)|
    double r = (branch == gain_branch::above) ? z0 * (g + 1.0) / (g - 1.0)
                                              : z0 * (g - 1.0) / (g + 1.0);
    return {r};
}

double renormalized_inductance(const pumped_array_params& p, double circulating_power_w,
                               double stark_coeff_per_w) {
    p.validate();
    if (!(circulating_power_w >= 0.0))
        throw validation_error("circulating power must be nonnegative");
    if (!(stark_coeff_per_w >= 0.0)) throw validation_error("stark_coeff must be nonnegative");
    return p.l_array * (1.0 + stark_coeff_per_w * circulating_power_w);
}

}  // namespace spa
