#include "spa/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace spa {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

chebyshev_prototype chebyshev_prototype::default_table() {
    // Tabulated two-pole equiripple prototype (0.1 dB ripple, 20 dB gain).
    return {0.237197, 0.135667, 1.119170};
}

void chebyshev_prototype::validate() const {
    if (!(g1 > 0.0) || !(g2 > 0.0) || !(g3 > 0.0))
        throw validation_error("prototype coefficients must be positive");
}

void synthesis_spec::validate() const {
    if (!(f0 > 0.0)) throw validation_error("f0 must be positive");
    if (!(w > 0.0 && w < 1.0)) throw validation_error("fractional bandwidth must be in (0,1)");
    if (!(z0 > 0.0)) throw validation_error("z0 must be positive");
    if (!(cc > 0.0)) throw validation_error("cc must be positive");
    if (!(l_array > 0.0)) throw validation_error("l_array must be positive");
    prototype.validate();
}

matching_network_values synthesize_matching(const synthesis_spec& spec) {
    spec.validate();
    double omega0 = two_pi * spec.f0;
    double g1 = spec.prototype.g1, g2 = spec.prototype.g2, g3 = spec.prototype.g3;

    double q_in = omega0 * spec.z0 * spec.cc;
    double z_in = spec.z0 * (1.0 + q_in * q_in) / (q_in * q_in);
    double z2 = spec.w * z_in / (g3 * g2);
    double l2 = z2 / omega0;
    double z1 = omega0 * spec.l_array;
    double c12 = spec.w / (omega0 * std::sqrt(z1 * z2 * g1 * g2));
    double c1 = 1.0 / (omega0 * z1) - c12;
    double c2 = 1.0 / (omega0 * z2) - c12 - spec.cc / (1.0 + q_in * q_in);

    if (c1 <= 0.0)
        throw infeasible_error("synthesis infeasible: C1 = " + std::to_string(c1 * 1e15) +
                               " fF (short by " + std::to_string(-c1 * 1e15) + " fF)");
    if (c2 <= 0.0)
        throw infeasible_error("synthesis infeasible: C2 = " + std::to_string(c2 * 1e15) +
                               " fF (short by " + std::to_string(-c2 * 1e15) + " fF)");

    return {spec.l_array, l2, spec.cc, c12, c1, c2};
}

ladder_network matching_ladder(const matching_network_values& v, double z0) {
    ladder_network net;
    net.z0 = {z0, z0};
    net.elements = {
        {element_kind::capacitor, topology::series, v.cc},
        {element_kind::capacitor, topology::shunt, v.c2},
        {element_kind::inductor, topology::shunt, v.l2},
        {element_kind::capacitor, topology::series, v.c12},
        {element_kind::capacitor, topology::shunt, v.c1},
    };
    return net;
}

ladder_network pump_filter_ladder(const pump_filter_values& v, double z0) {
    ladder_network net;
    net.z0 = {z0, z0};
    net.elements = {
        {element_kind::capacitor, topology::shunt, v.c3},
        {element_kind::inductor, topology::shunt, v.l3},
        {element_kind::capacitor, topology::series, v.c34},
        {element_kind::capacitor, topology::shunt, v.c4},
        {element_kind::inductor, topology::shunt, v.l4},
    };
    return net;
}

pump_filter_values synthesize_pump_filter(double center_hz, double passband_hz, double z0) {
    if (!(center_hz > 0.0) || !(z0 > 0.0))
        throw validation_error("pump filter center and z0 must be positive");
    if (!(passband_hz > 0.0 && passband_hz < center_hz))
        throw validation_error("pump filter requires 0 < passband < center");

    // Coupled-resonator bandpass from the n = 2 Butterworth prototype
    // (g1 = g2 = sqrt(2)). The capacitive coupling inverter is dispersive and
    // also loads the resonators, which narrows the realized band and pulls the
    // peak low; the fixed design-bandwidth and design-center factors below
    // compensate (calibrated once against the ladder evaluation).
    constexpr double g1 = std::numbers::sqrt2, g2 = std::numbers::sqrt2;
    constexpr double bw_factor = 0.78;
    constexpr double center_factor = 1.04;

    double wd = bw_factor * passband_hz / center_hz;
    double omega0 = two_pi * center_factor * center_hz;

    double c_node = g1 / (wd * z0 * omega0);  // full nodal capacitance, sets Qe
    double k12 = wd / std::sqrt(g1 * g2);
    double c34 = k12 * c_node;
    double c_shunt = c_node - c34;
    double l_node = 1.0 / (omega0 * omega0 * c_node);

    if (c_shunt <= 0.0)
        throw infeasible_error("pump filter infeasible: coupling exceeds nodal capacitance");

    pump_filter_values v{l_node, l_node, c_shunt, c_shunt, c34};

    // Verify the realized response against the requested targets.
    auto resp = cascade(pump_filter_ladder(v, z0),
                        frequency_grid::linspace(0.5 * center_hz, 1.5 * center_hz, 4001));
    std::size_t ipk = 0;
    double pk = -1.0;
    for (std::size_t i = 0; i < resp.s21.size(); ++i) {
        double m = std::abs(resp.s21[i]);
        if (m > pk) { pk = m; ipk = i; }
    }
    double f_pk = resp.grid.points[ipk];
    if (std::abs(f_pk - center_hz) > 0.05 * center_hz)
        throw infeasible_error("pump filter peak off-center: " + std::to_string(f_pk) + " Hz");
    double half = pk / std::numbers::sqrt2;
    std::size_t lo = ipk, hi = ipk;
    while (lo > 0 && std::abs(resp.s21[lo - 1]) >= half) --lo;
    while (hi + 1 < resp.s21.size() && std::abs(resp.s21[hi + 1]) >= half) ++hi;
    double bw = resp.grid.points[hi] - resp.grid.points[lo];
    if (std::abs(bw - passband_hz) > 0.25 * passband_hz)
        throw infeasible_error("pump filter bandwidth off-target: " + std::to_string(bw) + " Hz");

    return v;
}

corenorm_result corenormalize(const synthesis_spec& spec, const pump_filter_values& filt,
                              double tol, int max_iter) {
    spec.validate();
    if (!(tol > 0.0)) throw validation_error("corenormalize tol must be positive");
    if (max_iter < 1) throw validation_error("corenormalize max_iter must be >= 1");

    auto max_rel_diff = [](const matching_network_values& a, const matching_network_values& b) {
        auto rel = [](double x, double y) {
            double scale = std::max(std::abs(x), std::abs(y));
            return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
        };
        return std::max({rel(a.l_array, b.l_array), rel(a.l2, b.l2), rel(a.cc, b.cc),
                         rel(a.c12, b.c12), rel(a.c1, b.c1), rel(a.c2, b.c2)});
    };

    matching_network_values prev = synthesize_matching(spec);
    synthesis_spec eff = spec;
    eff.l_array = spec.l_array + filt.l4;
    for (int iter = 1; iter <= max_iter; ++iter) {
        matching_network_values cur = synthesize_matching(eff);
        if (max_rel_diff(cur, prev) < tol) return {cur, iter};
        prev = cur;
    }
    throw numerical_error("corenormalize did not converge in " + std::to_string(max_iter) +
                          " iterations (last L2 = " + std::to_string(prev.l2 * 1e9) + " nH)");
}

double design_negative_resistance(const synthesis_spec& spec) {
    spec.validate();
    double z1 = two_pi * spec.f0 * spec.l_array;
    return z1 * spec.prototype.g1 / spec.w;
}

double environment_resistance(const synthesis_spec& spec) {
    return design_negative_resistance(spec) / spec.prototype.g3;
}

double max_gain_db(double r_p, double r_env) {
    if (!(r_p > 0.0) || !(r_env > 0.0))
        throw validation_error("max_gain_db requires positive resistances");
    if (r_p == r_env) throw numerical_error("oscillation threshold: r_p == r_env");
    double g = (r_p + r_env) / (r_p - r_env);
    return 10.0 * std::log10(g * g);
}

}  // namespace spa
