#include "spa/gain.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spa/parallel.hpp"

namespace spa {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Reflection into the matching ladder terminated by the pumped array,
// with the array inductance overridden (compression renormalization).
complex gamma_at(const ladder_network& ladder, const pumped_array_params& array, double f,
                 double l_eff) {
    pumped_array_params p = array;
    p.l_array = l_eff;
    // Keep c3_phi_p fixed: R_p = L c3_phi_p^2/(z0 c1) then scales with L,
    // renormalizing both terms of the array admittance together.
    complex y = array_admittance(p, two_pi * f);
    complex zt = complex{1.0, 0.0} / y;

    abcd_matrix m;
    for (const auto& e : ladder.elements) m = m * element_abcd(e, f);
    complex den = m.c * zt + m.d;
    if (std::abs(den) < 1e-30)
        throw numerical_error("reflection pole at " + std::to_string(f) + " Hz");
    complex zin = (m.a * zt + m.b) / den;
    complex gden = zin + ladder.z0[0];
    if (std::abs(gden) < 1e-12)
        throw numerical_error("reflection pole (oscillation threshold) at " +
                              std::to_string(f) + " Hz");
    return (zin - ladder.z0[0]) / gden;
}

// Signal/idler dB-mean gain and signal phase at one frequency.
void gain_point(const ladder_network& ladder, const pumped_array_params& array, double f,
                double l_eff, double& gain_db, double& phase_deg) {
    double fi = array.pump_freq - f;
    if (!(fi > 0.0))
        throw validation_error("idler frequency nonpositive at signal " + std::to_string(f) +
                               " Hz (pump too low)");
    complex gs = gamma_at(ladder, array, f, l_eff);
    complex gi = gamma_at(ladder, array, fi, l_eff);
    gain_db = 10.0 * std::log10(std::abs(gs) * std::abs(gi));
    phase_deg = std::arg(gs) * 180.0 / std::numbers::pi;
}

}  // namespace

gain_profile evaluate_gain(const matching_network_values& net, const pumped_array_params& array,
                           const frequency_grid& grid) {
    array.validate();
    grid.validate();
    ladder_network ladder = matching_ladder(net, array.z0);
    ladder.validate();

    gain_profile out;
    out.grid = grid;
    out.gain_db.resize(grid.size());
    out.phase_deg.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        gain_point(ladder, array, grid.points[i], array.l_array, out.gain_db[i],
                   out.phase_deg[i]);
    });
    return out;
}

flat_top_metrics compute_flat_top_metrics(const gain_profile& p, double ripple_budget_db) {
    if (p.gain_db.empty() || p.gain_db.size() != p.grid.points.size())
        throw validation_error("gain profile is empty or inconsistent");
    if (!(ripple_budget_db > 0.0)) throw validation_error("ripple budget must be positive");

    std::size_t n = p.gain_db.size();
    std::size_t ipk = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (p.gain_db[i] > p.gain_db[ipk]) ipk = i;
    double peak = p.gain_db[ipk];
    if (peak < 3.0) throw validation_error("no gain: profile peak below 3 dB");

    // Contiguous 3 dB band around the peak.
    std::size_t lo3 = ipk, hi3 = ipk;
    while (lo3 > 0 && p.gain_db[lo3 - 1] >= peak - 3.0) --lo3;
    while (hi3 + 1 < n && p.gain_db[hi3 + 1] >= peak - 3.0) ++hi3;

    // Widest window within [lo3, hi3] containing the peak sample with
    // max - min <= budget. Sliding window with monotonic min/max deques;
    // strictly-greater replacement keeps the lowest-frequency tie.
    std::vector<std::size_t> qmin, qmax;
    std::size_t best_l = ipk, best_r = ipk, l = lo3;
    std::size_t head_min = 0, head_max = 0;
    for (std::size_t r = lo3; r <= hi3; ++r) {
        while (qmin.size() > head_min && p.gain_db[qmin.back()] >= p.gain_db[r]) qmin.pop_back();
        while (qmax.size() > head_max && p.gain_db[qmax.back()] <= p.gain_db[r]) qmax.pop_back();
        qmin.push_back(r);
        qmax.push_back(r);
        while (p.gain_db[qmax[head_max]] - p.gain_db[qmin[head_min]] > ripple_budget_db) {
            if (qmin[head_min] == l) ++head_min;
            if (qmax[head_max] == l) ++head_max;
            ++l;
        }
        if (l <= ipk && ipk <= r && (r - l) > (best_r - best_l)) {
            best_l = l;
            best_r = r;
        }
    }

    flat_top_metrics m;
    m.peak_db = peak;
    m.bw_3db_hz = p.grid.points[hi3] - p.grid.points[lo3];
    m.bw_ripple_hz = p.grid.points[best_r] - p.grid.points[best_l];
    m.center_hz = 0.5 * (p.grid.points[best_l] + p.grid.points[best_r]);
    double gmin = p.gain_db[best_l], gmax = gmin;
    for (std::size_t i = best_l; i <= best_r; ++i) {
        gmin = std::min(gmin, p.gain_db[i]);
        gmax = std::max(gmax, p.gain_db[i]);
    }
    m.ripple_db = gmax - gmin;
    return m;
}

namespace {

// Peak gain for a candidate pump strength; +inf when past the oscillation
// threshold (reflection pole inside the band).
double peak_gain_db(const matching_network_values& net, pumped_array_params array,
                    double c3_phi_p, const frequency_grid& grid) {
    array.c3_phi_p = c3_phi_p;
    try {
        gain_profile p = evaluate_gain(net, array, grid);
        double pk = p.gain_db[0];
        for (double g : p.gain_db) pk = std::max(pk, g);
        return pk;
    } catch (const numerical_error&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

std::vector<pump_sweep_point> tunable_band_sweep(const matching_network_values& net,
                                                 const pumped_array_params& array,
                                                 const std::vector<double>& pump_freqs,
                                                 double gain_target_db,
                                                 const frequency_grid& grid,
                                                 double ripple_budget_db) {
    array.validate();
    if (!(gain_target_db > 3.0))
        throw validation_error("tunable sweep target must exceed 3 dB");

    std::vector<pump_sweep_point> out;
    out.reserve(pump_freqs.size());
    for (double fp : pump_freqs) {
        pump_sweep_point pt;
        pt.pump_freq = fp;
        pumped_array_params a = array;
        a.pump_freq = fp;
        try {
            // Peak gain is not monotone in pump strength once the pump is
            // detuned (the idler leaves the matched band), so walk upward in
            // fine geometric steps to the FIRST crossing of the target and
            // bisect inside that step.
            double lo = 1e-4;
            int guard = 0;
            while (peak_gain_db(net, a, lo, grid) >= gain_target_db && ++guard < 64) lo *= 0.5;
            if (guard >= 64) throw numerical_error("pump strength bracket failed (low side)");
            double hi = lo;
            bool crossed = false;
            for (int step = 0; step < 400; ++step) {
                double next = hi * 1.05;
                if (peak_gain_db(net, a, next, grid) >= gain_target_db) {
                    lo = hi;
                    hi = next;
                    crossed = true;
                    break;
                }
                hi = next;
                lo = next;
            }
            if (!crossed) throw numerical_error("pump strength bracket failed (high side)");
            double mid = hi, g_mid = 0.0;
            for (int it = 0; it < 200; ++it) {
                mid = 0.5 * (lo + hi);
                g_mid = peak_gain_db(net, a, mid, grid);
                if (std::abs(g_mid - gain_target_db) <= 0.05) break;
                (g_mid < gain_target_db ? lo : hi) = mid;
            }
            if (std::abs(g_mid - gain_target_db) > 0.1)
                throw numerical_error("target gain not attained");
            a.c3_phi_p = mid;
            pt.metrics = compute_flat_top_metrics(evaluate_gain(net, a, grid), ripple_budget_db);
            pt.c3_phi_p = mid;
            pt.attained = true;
        } catch (const std::runtime_error&) {
            pt.attained = false;
            pt.c3_phi_p = 0.0;
        }
        out.push_back(pt);
    }
    return out;
}

namespace {

struct point_solve {
    double l_eff = 0.0;
    bool converged = true;
};

// Damped fixed point for the circulating power at one frequency.
point_solve solve_circulating(const ladder_network& ladder, const pumped_array_params& array,
                              double f, double stark, double p_in_w) {
    double pc = 0.0;
    point_solve r;
    r.l_eff = array.l_array;
    if (stark == 0.0 || p_in_w == 0.0) return r;
    for (int it = 0; it < 1000; ++it) {
        double l_eff = array.l_array * (1.0 + stark * pc);
        complex gs = gamma_at(ladder, array, f, l_eff);
        double pc_new = std::norm(gs) * p_in_w;
        double next = 0.5 * pc + 0.5 * pc_new;
        bool done = std::abs(next - pc) <= 1e-9 * std::max(std::abs(next), 1e-300);
        pc = next;
        if (done) {
            r.l_eff = array.l_array * (1.0 + stark * pc);
            return r;
        }
    }
    r.converged = false;
    r.l_eff = array.l_array * (1.0 + stark * pc);
    return r;
}

}  // namespace

compression_result compression_sweep(const matching_network_values& net,
                                     const pumped_array_params& array, double stark_coeff_per_w,
                                     const std::vector<double>& input_powers_w,
                                     const frequency_grid& grid) {
    array.validate();
    grid.validate();
    if (!(stark_coeff_per_w >= 0.0)) throw validation_error("stark_coeff must be nonnegative");
    double prev = -1.0;
    for (double p : input_powers_w) {
        if (!(p >= 0.0) || p <= prev)
            throw validation_error("input powers must be nonnegative and ascending");
        prev = p;
    }

    ladder_network ladder = matching_ladder(net, array.z0);
    std::size_t n = grid.size();

    compression_result out;
    out.input_powers_w = input_powers_w;
    out.diverged.assign(n, 0);
    out.p1db_dbm.assign(n, std::numeric_limits<double>::quiet_NaN());

    gain_profile small_signal = evaluate_gain(net, array, grid);

    auto gain_at = [&](std::size_t i, double p_in) {
        double f = grid.points[i];
        point_solve s = solve_circulating(ladder, array, f, stark_coeff_per_w, p_in);
        if (!s.converged) out.diverged[i] = 1;
        double g, ph;
        gain_point(ladder, array, f, s.l_eff, g, ph);
        return std::pair<double, double>{g, ph};
    };

    for (double p_in : input_powers_w) {
        gain_profile prof;
        prof.grid = grid;
        prof.gain_db.resize(n);
        prof.phase_deg.resize(n);
        parallel_for(n, [&](std::size_t i) {
            auto [g, ph] = gain_at(i, p_in);
            prof.gain_db[i] = g;
            prof.phase_deg[i] = ph;
        });
        out.profiles.push_back(std::move(prof));
    }

    // Per-frequency 1 dB compression point: bracket over the supplied powers,
    // then bisect the power axis to 0.1 dB gain resolution.
    if (stark_coeff_per_w > 0.0 && !input_powers_w.empty()) {
        parallel_for(n, [&](std::size_t i) {
            double target = small_signal.gain_db[i] - 1.0;
            double p_lo = 0.0, p_hi = -1.0;
            for (std::size_t j = 0; j < input_powers_w.size(); ++j) {
                if (out.profiles[j].gain_db[i] <= target) {
                    p_hi = input_powers_w[j];
                    break;
                }
                p_lo = input_powers_w[j];
            }
            if (p_hi < 0.0) return;  // never compressed within the sweep
            double p_mid = p_hi;
            for (int it = 0; it < 80; ++it) {
                p_mid = 0.5 * (p_lo + p_hi);
                double g = gain_at(i, p_mid).first;
                if (std::abs(g - target) <= 0.05) break;
                (g > target ? p_lo : p_hi) = p_mid;
            }
            out.p1db_dbm[i] = 10.0 * std::log10(p_mid / 1e-3);
        });
    }
    return out;
}

}  // namespace spa
