#pragma once

#include "spa/netlist.hpp"

namespace spa {

// Pumped-array parameters. c3_phi_p is the dimensionless magnitude of the
// third-order coefficient times half the pump amplitude, |c3*phi_p/2|; the
// pump enters only through this scalar.
struct pumped_array_params {
    double l_array = 0.0;   // H
    double c3_phi_p = 0.0;  // dimensionless, >= 0
    double z0 = 50.0;       // ohm
    double c1 = 0.0;        // F, first-pole capacitance
    double pump_freq = 0.0; // Hz

    void validate() const;
};

struct negative_resistance {
    double r_p = 0.0;  // ohm, magnitude (> 0, != z0)
};

enum class gain_branch { above, below };

// Admittance of the pumped array at signal frequency omega_s (rad/s):
// inductive susceptance plus the pump-induced negative conductance -1/R_p.
complex array_admittance(const pumped_array_params& p, double omega_s);

// Magnitude of the pump-induced negative resistance,
// R_p = l_array * c3_phi_p^2 / (z0 * c1).
double negative_resistance_of(const pumped_array_params& p);

// Inverse helper: the c3_phi_p giving a prescribed R_p for fixed L, z0, C1.
double c3_phi_p_for_rp(double r_p, double l_array, double z0, double c1);

// Solve |(R + z0)/(R - z0)|^2 = 10^(g_db/10) on the requested side of z0.
negative_resistance rp_for_target_gain(double g_target_db, double z0, gain_branch branch);

// Phenomenological compression model: L_eff = l_array * (1 + stark_coeff * P_circ).
double renormalized_inductance(const pumped_array_params& p, double circulating_power_w,
                               double stark_coeff_per_w);

}  // namespace spa
