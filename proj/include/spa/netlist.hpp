#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "spa/errors.hpp"

namespace spa {

using complex = std::complex<double>;

// Strictly increasing, positive frequency points in Hz.
struct frequency_grid {
    std::vector<double> points;

    static frequency_grid linspace(double f_lo, double f_hi, std::size_t n);
    void validate() const;
    std::size_t size() const { return points.size(); }
};

enum class element_kind { inductor, capacitor, resistor };
enum class topology { series, shunt };

// One lumped element of a ladder two-port. Values are H, F, or ohm.
// Resistors may be negative (gain elements); L and C must be nonnegative,
// with zero mapping to the identity / open limit.
struct lumped_element {
    element_kind kind = element_kind::resistor;
    topology topo = topology::series;
    double value = 0.0;

    void validate() const;
};

// Ordered ladder from port 1 to port 2 with real port impedances.
struct ladder_network {
    std::vector<lumped_element> elements;
    std::array<double, 2> z0{50.0, 50.0};

    void validate() const;
};

// Chain (ABCD) matrix.
struct abcd_matrix {
    complex a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    abcd_matrix operator*(const abcd_matrix& rhs) const;
    complex det() const { return a * d - b * c; }
};

struct two_port_response {
    frequency_grid grid;
    std::vector<abcd_matrix> abcd;
    std::vector<complex> s11, s21;
};

// Port-2 termination: either a finite complex impedance or an open circuit.
struct termination {
    bool open = false;
    complex z{0.0, 0.0};

    static termination open_circuit() { return {true, {}}; }
    static termination impedance(complex z_val) { return {false, z_val}; }
};

abcd_matrix element_abcd(const lumped_element& e, double freq_hz);

two_port_response cascade(const ladder_network& net, const frequency_grid& grid);

// Reflection coefficient seen from port 1 with port 2 terminated in
// z_term(f). Throws numerical_error on a pole (parametric oscillation).
std::vector<complex> reflection_from_termination(
    const ladder_network& net, const frequency_grid& grid,
    const std::function<termination(double)>& z_term);

}  // namespace spa
