#include "spa/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spa/rng.hpp"

namespace spa {

void dispersive_system::validate() const {
    if (!(readout_freq > 0.0)) throw validation_error("readout_freq must be positive");
    if (!(kappa > 0.0)) throw validation_error("kappa must be positive");
    if (!(kappa_ext > 0.0 && kappa_ext <= kappa))
        throw validation_error("kappa_ext must satisfy 0 < kappa_ext <= kappa");
    if (!(t1 > 0.0)) throw validation_error("t1 must be positive");
    if (!std::isfinite(chi) || !std::isfinite(drive_detuning))
        throw validation_error("chi and drive_detuning must be finite");
}

pointer_pair pointer_states(const dispersive_system& s, double drive_amp) {
    s.validate();
    double root_kext = std::sqrt(s.kappa_ext);
    complex pole_g{s.kappa / 2.0, s.drive_detuning - s.chi / 2.0};
    complex pole_e{s.kappa / 2.0, s.drive_detuning + s.chi / 2.0};
    return {root_kext * drive_amp / pole_g, root_kext * drive_amp / pole_e};
}

double dephasing_rate(const dispersive_system& s, double drive_amp) {
    auto [ag, ae] = pointer_states(s, drive_amp);
    return (s.kappa / 2.0) * std::norm(ag - ae);
}

double measurement_rate(const dispersive_system& s, double drive_amp, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw validation_error("eta must be in (0, 1]");
    auto [ag, ae] = pointer_states(s, drive_amp);
    return 2.0 * eta * s.kappa_ext * std::norm(ag - ae);
}

efficiency_result efficiency(const dispersive_system& s, double drive_amp, double eta_in) {
    double gamma_phi = dephasing_rate(s, drive_amp);
    if (gamma_phi == 0.0) throw numerical_error("efficiency undefined: zero dephasing rate");
    double m = measurement_rate(s, drive_amp, eta_in);
    bool ok = std::abs(s.kappa_ext - s.kappa) <= 1e-12 * s.kappa;
    return {m / (4.0 * gamma_phi), ok};
}

void sim_request::validate() const {
    if (systems.empty()) throw validation_error("at least one dispersive system required");
    if (drive_amps.size() != systems.size() || eta.size() != systems.size())
        throw validation_error("drive_amps and eta must match the number of systems");
    double kappa_max = 0.0;
    for (const auto& s : systems) {
        s.validate();
        kappa_max = std::max(kappa_max, s.kappa);
    }
    for (double e : eta)
        if (!(e > 0.0 && e <= 1.0)) throw validation_error("eta must be in (0, 1]");
    if (!(duration > 0.0) || !(timestep > 0.0))
        throw validation_error("duration and timestep must be positive");
    if (timestep > 1.0 / (10.0 * kappa_max))
        throw validation_error("undersampling: timestep exceeds 1/(10 kappa_max)");
    if (n_traj == 0) throw validation_error("n_traj must be positive");
}

namespace {

// Analytic cavity transient with at most one e->g jump at t_jump.
complex alpha_at(const dispersive_system& s, double drive_amp, qubit_state prepared,
                 double t_jump, double t) {
    double root_kext = std::sqrt(s.kappa_ext);
    complex pole_g{s.kappa / 2.0, s.drive_detuning - s.chi / 2.0};
    complex pole_e{s.kappa / 2.0, s.drive_detuning + s.chi / 2.0};
    complex ss_g = root_kext * drive_amp / pole_g;
    complex ss_e = root_kext * drive_amp / pole_e;

    if (prepared == qubit_state::g)
        return ss_g * (1.0 - std::exp(-pole_g * t));
    if (t <= t_jump)
        return ss_e * (1.0 - std::exp(-pole_e * t));
    complex at_jump = ss_e * (1.0 - std::exp(-pole_e * t_jump));
    return ss_g + (at_jump - ss_g) * std::exp(-pole_g * (t - t_jump));
}

std::uint64_t prep_code(const std::vector<qubit_state>& prepared) {
    std::uint64_t code = 1;  // leading 1 distinguishes lengths
    for (auto q : prepared) code = (code << 1) | (q == qubit_state::e ? 1u : 0u);
    return code;
}

}  // namespace

std::vector<std::vector<iq_record>> simulate_records(const sim_request& req,
                                                     const std::vector<qubit_state>& prepared) {
    req.validate();
    if (prepared.size() != req.systems.size())
        throw validation_error("prepared states must match the number of systems");

    std::size_t n_samples = static_cast<std::size_t>(std::llround(req.duration / req.timestep));
    if (n_samples == 0) throw validation_error("duration shorter than one timestep");

    double flip = (prepared[0] == qubit_state::e) ? -1.0 : 1.0;
    std::uint64_t code = prep_code(prepared);

    std::vector<std::vector<iq_record>> out(req.systems.size());
    for (std::size_t c = 0; c < req.systems.size(); ++c) {
        const auto& sys = req.systems[c];
        double noise_var = 1.0 / req.eta[c];
        double rec_scale = std::sqrt(sys.kappa_ext * req.timestep);
        out[c].reserve(req.n_traj);
        for (std::size_t k = 0; k < req.n_traj; ++k) {
            gaussian_rng rng(derive_seed(req.seed, (code << 16) | c, k));
            double t_jump = std::numeric_limits<double>::infinity();
            if (prepared[c] == qubit_state::e)
                t_jump = -sys.t1 * std::log(rng.uniform());

            iq_record rec;
            rec.timestep = req.timestep;
            rec.samples.resize(n_samples);
            for (std::size_t n = 0; n < n_samples; ++n) {
                double t = (static_cast<double>(n) + 1.0) * req.timestep;
                complex r = rec_scale * alpha_at(sys, req.drive_amps[c], prepared[c], t_jump, t);
                for (const auto& line : req.injected) {
                    double offset = line.freq_hz - sys.readout_freq;
                    double ph = 2.0 * std::numbers::pi * offset * t + line.phase;
                    r += flip * line.amp * std::sqrt(req.timestep) *
                         complex{std::cos(ph), std::sin(ph)};
                }
                rec.samples[n] = r + rng.complex_normal(noise_var);
            }
            out[c].push_back(std::move(rec));
        }
    }
    return out;
}

mux_experiment simulate_experiment(const sim_request& req) {
    req.validate();
    mux_experiment exp;
    exp.timestep = req.timestep;
    std::vector<qubit_state> all_g(req.systems.size(), qubit_state::g);
    exp.preps.push_back(all_g);
    for (std::size_t c = 0; c < req.systems.size(); ++c) {
        auto prep = all_g;
        prep[c] = qubit_state::e;
        exp.preps.push_back(prep);
    }
    for (const auto& prep : exp.preps) exp.records.push_back(simulate_records(req, prep));
    return exp;
}

namespace {

struct scored_channel {
    std::vector<double> x_g, x_e;  // discriminant scores
};

std::vector<complex> filter_record(const std::vector<biquad>& sos, const iq_record& rec) {
    return sos_filter(sos, rec.samples);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v, double m) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

fidelity_report demodulate_and_classify(const mux_experiment& exp, double filter_cutoff_hz,
                                        int filter_order) {
    if (exp.records.empty() || exp.preps.size() != exp.records.size())
        throw validation_error("experiment records are empty or inconsistent");
    std::size_t n_ch = exp.records[0].size();
    if (exp.preps.size() != n_ch + 1)
        throw validation_error("expected all-g preparation plus one excited prep per channel");

    auto sos = butterworth_lowpass(filter_order, filter_cutoff_hz, 1.0 / exp.timestep);

    fidelity_report report;
    std::vector<std::vector<complex>> envelopes(n_ch);
    std::vector<double> thresholds(n_ch);

    for (std::size_t c = 0; c < n_ch; ++c) {
        const auto& recs_g = exp.records[0][c];
        const auto& recs_e = exp.records[c + 1][c];
        if (recs_g.empty() || recs_e.empty())
            throw validation_error("both prepared states required per channel");

        std::vector<std::vector<complex>> filt_g, filt_e;
        for (const auto& r : recs_g) filt_g.push_back(filter_record(sos, r));
        for (const auto& r : recs_e) filt_e.push_back(filter_record(sos, r));

        std::size_t n = filt_g[0].size();
        std::vector<complex> mean_g(n), mean_e(n);
        for (const auto& tr : filt_g)
            for (std::size_t i = 0; i < n; ++i) mean_g[i] += tr[i];
        for (const auto& tr : filt_e)
            for (std::size_t i = 0; i < n; ++i) mean_e[i] += tr[i];
        for (std::size_t i = 0; i < n; ++i) {
            mean_g[i] /= static_cast<double>(filt_g.size());
            mean_e[i] /= static_cast<double>(filt_e.size());
        }

        std::vector<complex> env(n);
        for (std::size_t i = 0; i < n; ++i) env[i] = std::conj(mean_e[i] - mean_g[i]);
        envelopes[c] = env;

        auto score = [&](const std::vector<complex>& tr) {
            complex z{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) z += env[i] * tr[i];
            return z;
        };

        scored_channel sc;
        complex bm_g{0, 0}, bm_e{0, 0};
        for (const auto& tr : filt_g) {
            complex z = score(tr);
            bm_g += z;
            sc.x_g.push_back(z.real());
        }
        for (const auto& tr : filt_e) {
            complex z = score(tr);
            bm_e += z;
            sc.x_e.push_back(z.real());
        }
        bm_g /= static_cast<double>(filt_g.size());
        bm_e /= static_cast<double>(filt_e.size());

        double m_g = mean_of(sc.x_g), m_e = mean_of(sc.x_e);
        double v_g = var_of(sc.x_g, m_g), v_e = var_of(sc.x_e, m_e);

        // Equal-likelihood threshold of the two fitted Gaussians; the root
        // between the means, falling back to the midpoint.
        double thr = 0.5 * (m_g + m_e);
        if (v_g > 0.0 && v_e > 0.0) {
            double a = 0.5 / v_g - 0.5 / v_e;
            double b = m_e / v_e - m_g / v_g;
            double cc = 0.5 * m_g * m_g / v_g - 0.5 * m_e * m_e / v_e +
                        0.5 * std::log(v_g / v_e);
            if (std::abs(a) < 1e-30) {
                if (std::abs(b) > 0.0) thr = -cc / b;
            } else {
                double disc = b * b - 4.0 * a * cc;
                if (disc >= 0.0) {
                    double r1 = (-b + std::sqrt(disc)) / (2.0 * a);
                    double r2 = (-b - std::sqrt(disc)) / (2.0 * a);
                    double lo = std::min(m_g, m_e), hi = std::max(m_g, m_e);
                    if (r1 >= lo && r1 <= hi)
                        thr = r1;
                    else if (r2 >= lo && r2 <= hi)
                        thr = r2;
                }
            }
        }

        double p0_g = 0.0, p1_e = 0.0;
        for (double x : sc.x_g)
            if (x < thr) p0_g += 1.0;
        for (double x : sc.x_e)
            if (x >= thr) p1_e += 1.0;
        p0_g /= static_cast<double>(sc.x_g.size());
        p1_e /= static_cast<double>(sc.x_e.size());

        channel_stats st;
        st.fidelity = 0.5 * (p0_g + p1_e);
        st.threshold = thr;
        st.blob_mean_g = bm_g;
        st.blob_mean_e = bm_e;
        st.var_g = v_g;
        st.var_e = v_e;
        double sigma = std::sqrt(0.5 * (v_g + v_e));
        st.degenerate = (sigma > 0.0) && (std::abs(m_e - m_g) < 0.1 * sigma);
        report.channels.push_back(st);
        thresholds[c] = thr;
    }

    // Crosstalk: channel 2 excitation probability shift caused by channel-1
    // state, both with channel 2 prepared in g.
    if (n_ch >= 2) {
        const std::size_t victim = 1;
        const auto& env = envelopes[victim];
        double thr = thresholds[victim];
        auto p1_of = [&](const std::vector<iq_record>& recs) {
            double p = 0.0;
            for (const auto& r : recs) {
                auto tr = filter_record(sos, r);
                complex z{0.0, 0.0};
                for (std::size_t i = 0; i < env.size(); ++i) z += env[i] * tr[i];
                if (z.real() >= thr) p += 1.0;
            }
            return p / static_cast<double>(recs.size());
        };
        double p1_when_ch1_g = p1_of(exp.records[0][victim]);
        double p1_when_ch1_e = p1_of(exp.records[1][victim]);
        report.eps12 = p1_when_ch1_e - p1_when_ch1_g;
    }
    return report;
}

noise_budget noise_budget_solve(double g_spa_db, double nvr_db, double eta_corr) {
    if (!(g_spa_db > 0.0)) throw validation_error("g_spa_db must be positive");
    if (!(eta_corr > 0.0 && eta_corr <= 1.0)) throw validation_error("eta_corr must be in (0, 1]");

    noise_budget nb;
    nb.g_spa = std::pow(10.0, g_spa_db / 10.0);
    nb.nvr = std::pow(10.0, nvr_db / 10.0);
    nb.eta_corr = eta_corr;
    nb.n_sys = nb.g_spa * nb.n_q / (eta_corr * nb.nvr) - nb.n_q;
    nb.n_spa = nb.n_q * (1.0 / eta_corr - 1.0) - nb.n_sys / nb.g_spa;
    if (nb.n_sys < 0.0)
        throw validation_error("inconsistent measurement: n_sys = " + std::to_string(nb.n_sys));
    if (nb.n_spa < 0.0)
        throw validation_error("inconsistent measurement: n_spa = " + std::to_string(nb.n_spa));
    return nb;
}

double delta_a_db(double eta1, double eta2) {
    if (!(eta1 > 0.0) || !(eta2 > 0.0)) throw validation_error("efficiencies must be positive");
    return 10.0 * std::log10(eta1 / eta2);
}

}  // namespace spa
