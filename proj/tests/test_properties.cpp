#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spa/imd.hpp"
#include "spa/netlist.hpp"
#include "spa/readout.hpp"
#include "spa/synthesis.hpp"

using namespace spa;

namespace {

constexpr int n_cases = 1000;

// Log-uniform sample in [lo, hi].
double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

ladder_network random_lossless(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 6), kind(0, 1), topo(0, 1);
    ladder_network net;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        element_kind k = kind(rng) == 0 ? element_kind::inductor : element_kind::capacitor;
        topology tp = topo(rng) == 0 ? topology::series : topology::shunt;
        double value = (k == element_kind::inductor) ? log_uniform(rng, 1e-11, 1e-8)
                                                     : log_uniform(rng, 1e-15, 1e-12);
        net.elements.push_back({k, tp, value});
    }
    return net;
}

ladder_network random_lossy(std::mt19937_64& rng) {
    auto net = random_lossless(rng);
    std::uniform_int_distribution<int> topo(0, 1);
    net.elements.push_back({element_kind::resistor,
                            topo(rng) == 0 ? topology::series : topology::shunt,
                            log_uniform(rng, 1.0, 1e3)});
    return net;
}

abcd_matrix random_abcd(std::mt19937_64& rng) {
    auto e = [&]() -> lumped_element {
        std::uniform_int_distribution<int> kind(0, 2), topo(0, 1);
        int k = kind(rng);
        element_kind ek = k == 0   ? element_kind::inductor
                          : k == 1 ? element_kind::capacitor
                                   : element_kind::resistor;
        double value = ek == element_kind::inductor    ? log_uniform(rng, 1e-11, 1e-8)
                       : ek == element_kind::capacitor ? log_uniform(rng, 1e-15, 1e-12)
                                                       : log_uniform(rng, 1.0, 1e3);
        return {ek, topo(rng) == 0 ? topology::series : topology::shunt, value};
    };
    return element_abcd(e(), 9e9) * element_abcd(e(), 9e9);
}

}  // namespace

TEST_CASE("lossless networks are unitary") {
    std::mt19937_64 rng(101);
    for (int c = 0; c < n_cases; ++c) {
        auto net = random_lossless(rng);
        double f = log_uniform(rng, 1e8, 4e10);
        auto resp = cascade(net, frequency_grid{{f}});
        double power = std::norm(resp.s11[0]) + std::norm(resp.s21[0]);
        CHECK(std::abs(power - 1.0) <= 1e-9);
    }
}

TEST_CASE("reciprocity: ABCD determinant is 1") {
    std::mt19937_64 rng(202);
    for (int c = 0; c < n_cases; ++c) {
        auto net = random_lossy(rng);
        double f = log_uniform(rng, 1e8, 4e10);
        abcd_matrix m = element_abcd(net.elements[0], f);
        for (std::size_t i = 1; i < net.elements.size(); ++i)
            m = m * element_abcd(net.elements[i], f);
        // AD and BC can be individually large before cancelling; bound the
        // determinant error relative to the magnitude of the products.
        double scale = 1.0 + std::abs(m.a) * std::abs(m.d) + std::abs(m.b) * std::abs(m.c);
        CHECK(std::abs(m.det() - complex{1.0, 0.0}) <= 1e-12 * scale);
    }
}

TEST_CASE("cascade multiplication is associative") {
    std::mt19937_64 rng(303);
    for (int c = 0; c < n_cases; ++c) {
        auto m1 = random_abcd(rng), m2 = random_abcd(rng), m3 = random_abcd(rng);
        auto left = (m1 * m2) * m3;
        auto right = m1 * (m2 * m3);
        double scale = std::abs(left.a) + std::abs(left.b) + std::abs(left.c) +
                       std::abs(left.d) + 1.0;
        CHECK(std::abs(left.a - right.a) <= 1e-12 * scale);
        CHECK(std::abs(left.b - right.b) <= 1e-12 * scale);
        CHECK(std::abs(left.c - right.c) <= 1e-12 * scale);
        CHECK(std::abs(left.d - right.d) <= 1e-12 * scale);
    }
}

TEST_CASE("passive terminations keep |Gamma| <= 1") {
    std::mt19937_64 rng(404);
    for (int c = 0; c < n_cases; ++c) {
        auto net = random_lossless(rng);
        double f = log_uniform(rng, 1e9, 2e10);
        double r = log_uniform(rng, 1e-2, 1e4);
        double x = log_uniform(rng, 1e-2, 1e4) * (rng() % 2 ? 1.0 : -1.0);
        auto g = reflection_from_termination(net, frequency_grid{{f}}, [&](double) {
            return termination::impedance(complex{r, x});
        });
        CHECK(std::abs(g[0]) <= 1.0 + 1e-9);
    }
}

TEST_CASE("synthesis scaling law holds for random designs") {
    std::mt19937_64 rng(505);
    int done = 0, attempts = 0;
    while (done < n_cases && attempts < 10 * n_cases) {
        ++attempts;
        synthesis_spec s;
        s.f0 = log_uniform(rng, 2e9, 2e10);
        s.w = log_uniform(rng, 0.005, 0.08);
        s.z0 = 50.0;
        s.cc = log_uniform(rng, 5e-14, 5e-13);
        s.l_array = log_uniform(rng, 5e-10, 1e-8);
        double k = log_uniform(rng, 0.2, 5.0);
        matching_network_values v;
        try {
            v = synthesize_matching(s);
        } catch (const infeasible_error&) {
            continue;  // random corner outside the feasible region
        }
        auto sk = s;
        sk.f0 *= k;
        sk.cc /= k;
        sk.l_array /= k;
        matching_network_values vk;
        try {
            vk = synthesize_matching(sk);
        } catch (const infeasible_error&) {
            continue;
        }
        CHECK(vk.l2 == doctest::Approx(v.l2 / k).epsilon(1e-10));
        CHECK(vk.c12 == doctest::Approx(v.c12 / k).epsilon(1e-10));
        CHECK(vk.c1 == doctest::Approx(v.c1 / k).epsilon(1e-10));
        CHECK(vk.c2 == doctest::Approx(v.c2 / k).epsilon(1e-10));
        ++done;
    }
    CHECK(done == n_cases);
}

TEST_CASE("fit translation covariance on random sweeps") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2), shift(-30.0, 30.0);
    for (int c = 0; c < n_cases; ++c) {
        double b1 = jitter(rng) * 100.0;       // random slope-1 intercept
        double b3 = b1 - 2.0 * (jitter(rng) * 50.0 + 100.0);  // IIP3 well above sweep
        std::vector<power_sweep_row> rows;
        for (double p = -140.0; p <= -110.0; p += 3.0)
            rows.push_back({p, p + b1 + jitter(rng), 3.0 * p + b3 + jitter(rng), std::nullopt});
        auto base = fit_power_laws(rows);
        double dc = shift(rng);
        auto shifted_rows = rows;
        for (auto& r : shifted_rows) r.p_in_dbm += dc;
        auto shifted = fit_power_laws(shifted_rows);
        CHECK(shifted.iip3_dbm == doctest::Approx(base.iip3_dbm + dc).epsilon(1e-12));
        CHECK(base.p1db_dbm.has_value() == shifted.p1db_dbm.has_value());
        if (base.p1db_dbm)
            CHECK(*shifted.p1db_dbm == doctest::Approx(*base.p1db_dbm + dc).epsilon(1e-12));
    }
}

TEST_CASE("simulation seed determinism on random tiny experiments") {
    std::mt19937_64 rng(707);
    for (int c = 0; c < n_cases; ++c) {
        sim_request req;
        dispersive_system s;
        s.readout_freq = log_uniform(rng, 5e9, 1e10);
        s.kappa = 2.0 * std::acos(-1.0) * log_uniform(rng, 1e6, 1e7);
        s.kappa_ext = s.kappa;
        s.chi = -0.3 * s.kappa;
        s.t1 = log_uniform(rng, 1e-6, 1e-4);
        req.systems = {s};
        req.drive_amps = {log_uniform(rng, 1e4, 1e6)};
        req.eta = {0.2 + 0.8 * (rng() % 1000) / 1000.0};
        req.timestep = 0.9 / (10.0 * s.kappa);
        req.duration = 16.0 * req.timestep;
        req.seed = rng();
        req.n_traj = 2;
        auto a = simulate_records(req, {qubit_state::e});
        auto b = simulate_records(req, {qubit_state::e});
        bool identical = true;
        for (std::size_t k = 0; k < a[0].size() && identical; ++k)
            for (std::size_t n = 0; n < a[0][k].samples.size(); ++n)
                if (a[0][k].samples[n] != b[0][k].samples[n]) {
                    identical = false;
                    break;
                }
        CHECK(identical);
        auto req2 = req;
        req2.seed = req.seed + 1;
        auto d = simulate_records(req2, {qubit_state::e});
        CHECK(d[0][0].samples[0] != a[0][0].samples[0]);
    }
}
