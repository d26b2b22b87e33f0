#include "spa/netlist.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spa/parallel.hpp"

namespace spa {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

frequency_grid frequency_grid::linspace(double f_lo, double f_hi, std::size_t n) {
    if (n == 0) throw validation_error("frequency grid must be nonempty");
    if (n == 1) {
        if (f_lo != f_hi) throw validation_error("single-point grid requires f_lo == f_hi");
    } else if (!(f_lo < f_hi)) {
        throw validation_error("frequency grid requires f_lo < f_hi");
    }
    frequency_grid g;
    g.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = (n == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        g.points[i] = f_lo + t * (f_hi - f_lo);
    }
    g.validate();
    return g;
}

void frequency_grid::validate() const {
    if (points.empty()) throw validation_error("frequency grid must be nonempty");
    double prev = 0.0;
    for (double f : points) {
        if (!(f > 0.0) || !std::isfinite(f))
            throw validation_error("frequency grid points must be positive and finite");
        if (!(f > prev)) throw validation_error("frequency grid must be strictly increasing");
        prev = f;
    }
}

void lumped_element::validate() const {
    if (!std::isfinite(value)) throw validation_error("element value must be finite");
    switch (kind) {
        case element_kind::inductor:
        case element_kind::capacitor:
            if (value < 0.0) throw validation_error("inductor/capacitor value must be nonnegative");
            break;
        case element_kind::resistor:
            if (value == 0.0) throw validation_error("resistor value must be nonzero");
            break;
    }
}

void ladder_network::validate() const {
    if (!(z0[0] > 0.0) || !(z0[1] > 0.0))
        throw validation_error("port impedances must be positive");
    for (const auto& e : elements) e.validate();
}

abcd_matrix abcd_matrix::operator*(const abcd_matrix& rhs) const {
    return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
            c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

namespace {

// Branch immittance: impedance for series elements, admittance for shunt.
complex branch_value(const lumped_element& e, double omega, bool want_admittance) {
    switch (e.kind) {
        case element_kind::inductor: {
            complex z{0.0, omega * e.value};
            if (!want_admittance) return z;
            // zero inductance shunt = short; caller guards via series use
            return complex{1.0, 0.0} / z;
        }
        case element_kind::capacitor: {
            complex y{0.0, omega * e.value};
            if (want_admittance) return y;
            return complex{1.0, 0.0} / y;
        }
        case element_kind::resistor: {
            complex z{e.value, 0.0};
            return want_admittance ? complex{1.0, 0.0} / z : z;
        }
    }
    throw validation_error("unknown element kind");
}

}  // namespace

abcd_matrix element_abcd(const lumped_element& e, double freq_hz) {
    if (!(freq_hz > 0.0)) throw validation_error("element_abcd requires positive frequency");
    e.validate();
    double omega = two_pi * freq_hz;

    // Degenerate limits map to the identity: a zero-valued series inductor or
    // shunt capacitor is a through; a zero-valued series capacitor (open) or
    // shunt inductor (short) is rejected as degenerate.
    if (e.value == 0.0) {
        bool is_identity =
            (e.kind == element_kind::inductor && e.topo == topology::series) ||
            (e.kind == element_kind::capacitor && e.topo == topology::shunt);
        if (is_identity) return {};
        throw numerical_error("zero-valued element is an open/short, not representable");
    }

    if (e.topo == topology::series) {
        complex z = branch_value(e, omega, false);
        return {complex{1.0, 0.0}, z, complex{0.0, 0.0}, complex{1.0, 0.0}};
    }
    complex y = branch_value(e, omega, true);
    return {complex{1.0, 0.0}, complex{0.0, 0.0}, y, complex{1.0, 0.0}};
}

two_port_response cascade(const ladder_network& net, const frequency_grid& grid) {
    net.validate();
    grid.validate();

    two_port_response resp;
    resp.grid = grid;
    std::size_t n = grid.size();
    resp.abcd.resize(n);
    resp.s11.resize(n);
    resp.s21.resize(n);

    double z01 = net.z0[0], z02 = net.z0[1];
    std::string pole_msg;  // first singular frequency found, reported after the loop

    parallel_for(n, [&](std::size_t i) {
        double f = grid.points[i];
        abcd_matrix m;
        for (const auto& e : net.elements) m = m * element_abcd(e, f);
        resp.abcd[i] = m;

        complex den = m.a * z02 + m.b + m.c * (z01 * z02) + m.d * z01;
        if (std::abs(den) == 0.0) {
            resp.s11[i] = resp.s21[i] = complex{std::nan(""), std::nan("")};
            return;
        }
        resp.s11[i] = (m.a * z02 + m.b - m.c * (z01 * z02) - m.d * z01) / den;
        resp.s21[i] = 2.0 * std::sqrt(z01 * z02) / den;
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(resp.s11[i].real()))
            throw numerical_error("singular S-parameter conversion at " +
                                  std::to_string(grid.points[i]) + " Hz");
    }
    return resp;
}

std::vector<complex> reflection_from_termination(
    const ladder_network& net, const frequency_grid& grid,
    const std::function<termination(double)>& z_term) {
    net.validate();
    grid.validate();

    std::size_t n = grid.size();
    std::vector<complex> gamma(n);
    std::vector<unsigned char> pole(n, 0);

    double z01 = net.z0[0];
    parallel_for(n, [&](std::size_t i) {
        double f = grid.points[i];
        abcd_matrix m;
        for (const auto& e : net.elements) m = m * element_abcd(e, f);

        termination t = z_term(f);
        complex zin;
        if (t.open) {
            if (std::abs(m.c) < 1e-30) {
                pole[i] = 1;
                return;
            }
            zin = m.a / m.c;
        } else {
            complex den = m.c * t.z + m.d;
            if (std::abs(den) < 1e-30) {
                pole[i] = 1;
                return;
            }
            zin = (m.a * t.z + m.b) / den;
        }
        complex gden = zin + z01;
        if (std::abs(gden) < 1e-12) {
            pole[i] = 1;
            return;
        }
        gamma[i] = (zin - z01) / gden;
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (pole[i])
            throw numerical_error("reflection pole (oscillation threshold) at " +
                                  std::to_string(grid.points[i]) + " Hz");
    }
    return gamma;
}

}  // namespace spa
