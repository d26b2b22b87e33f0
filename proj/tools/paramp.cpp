// paramp: design/analysis front end for the negative-resistance parametric
// amplifier toolkit. One JSON config file, one section per module; dotted
// CLI overrides (--gain.ripple_budget_db 1.0) patch the config before any
// computation runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spa/config.hpp"
#include "spa/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Artifacts staged in memory and written atomically at the end, so failed
// runs leave no partial outputs.
struct artifact_sink {
    std::string out_dir;
    bool dry_run = false;
    std::map<std::string, std::string> files;

    void add(const std::string& name, std::string content) {
        files[out_dir + "/" + name] = std::move(content);
    }
    void flush() {
        if (dry_run) {
            std::printf("dry-run: would write %zu artifact(s):\n", files.size());
            for (const auto& [path, content] : files)
                std::printf("  %s (%zu bytes)\n", path.c_str(), content.size());
            return;
        }
        if (!files.empty()) fs::create_directories(out_dir);
        for (const auto& [path, content] : files) spa::write_text_file(path, content);
    }
};

spa::synthesis_spec need_synthesis(const spa::project_config& cfg) {
    if (!cfg.synthesis) throw spa::validation_error("config is missing the 'synthesis' section");
    return *cfg.synthesis;
}

spa::pumped_array_params pump_params(const spa::project_config& cfg,
                                     const spa::matching_network_values& net) {
    if (cfg.pump) return *cfg.pump;
    // Derive a default operating point from the synthesized network: the
    // design negative resistance and a degenerate pump at 2 f0.
    auto spec = need_synthesis(cfg);
    spa::pumped_array_params p;
    p.l_array = net.l_array;
    p.c1 = net.c1;
    p.z0 = spec.z0;
    p.pump_freq = 2.0 * spec.f0;
    p.c3_phi_p = spa::c3_phi_p_for_rp(spa::design_negative_resistance(spec), net.l_array,
                                      spec.z0, net.c1);
    return p;
}

std::string matching_table(const spa::matching_network_values& v) {
    std::string t;
    t += "component   value\n";
    t += "L_array     " + fmt(v.l_array * 1e9) + " nH\n";
    t += "L2          " + fmt(v.l2 * 1e9) + " nH\n";
    t += "Cc          " + fmt(v.cc * 1e12) + " pF\n";
    t += "C12         " + fmt(v.c12 * 1e12) + " pF\n";
    t += "C1          " + fmt(v.c1 * 1e12) + " pF\n";
    t += "C2          " + fmt(v.c2 * 1e12) + " pF\n";
    return t;
}

int cmd_synthesize(const spa::project_config& cfg, artifact_sink& sink) {
    auto spec = need_synthesis(cfg);
    auto raw = spa::synthesize_matching(spec);
    std::printf("matching network (raw synthesis)\n%s", matching_table(raw).c_str());

    spa::matching_network_values final_values = raw;
    if (cfg.pump_filter) {
        auto pf = spa::synthesize_pump_filter(cfg.pump_filter->center_hz,
                                              cfg.pump_filter->passband_hz, cfg.pump_filter->z0);
        auto co = spa::corenormalize(spec, pf, 1e-12, 16);
        final_values = co.values;
        std::printf("\nco-renormalized with pump-filter L4 (%d iteration(s))\n%s",
                    co.iterations, matching_table(co.values).c_str());
    }
    std::printf("\ndesign R_p = %s ohm, environment R = %s ohm, G_max = %s dB\n",
                fmt(spa::design_negative_resistance(spec)).c_str(),
                fmt(spa::environment_resistance(spec)).c_str(),
                fmt(spa::max_gain_db(spa::design_negative_resistance(spec),
                                     spa::environment_resistance(spec)))
                    .c_str());

    sink.add("matching_netlist.json",
             spa::netlist_to_json(spa::matching_ladder(final_values, spec.z0)));
    json jv;
    jv["raw"] = {{"l_array_H", raw.l_array}, {"l2_H", raw.l2},   {"cc_F", raw.cc},
                 {"c12_F", raw.c12},         {"c1_F", raw.c1},   {"c2_F", raw.c2}};
    jv["final"] = {{"l_array_H", final_values.l_array}, {"l2_H", final_values.l2},
                   {"cc_F", final_values.cc},           {"c12_F", final_values.c12},
                   {"c1_F", final_values.c1},           {"c2_F", final_values.c2}};
    sink.add("matching_values.json", jv.dump(2) + "\n");
    return 0;
}

int cmd_pump_filter(const spa::project_config& cfg, artifact_sink& sink) {
    if (!cfg.pump_filter) throw spa::validation_error("config is missing the 'pump_filter' section");
    auto pf = spa::synthesize_pump_filter(cfg.pump_filter->center_hz,
                                          cfg.pump_filter->passband_hz, cfg.pump_filter->z0);
    std::printf("pump filter components\n");
    std::printf("L3   %s nH\nL4   %s nH\nC3   %s pF\nC4   %s pF\nC34  %s pF\n",
                fmt(pf.l3 * 1e9).c_str(), fmt(pf.l4 * 1e9).c_str(), fmt(pf.c3 * 1e12).c_str(),
                fmt(pf.c4 * 1e12).c_str(), fmt(pf.c34 * 1e12).c_str());

    auto ladder = spa::pump_filter_ladder(pf, cfg.pump_filter->z0);
    auto grid = spa::frequency_grid::linspace(0.3 * cfg.pump_filter->center_hz,
                                              1.5 * cfg.pump_filter->center_hz, 4001);
    auto resp = spa::cascade(ladder, grid);
    sink.add("pump_filter_netlist.json", spa::netlist_to_json(ladder));
    sink.add("pump_filter_response.csv", spa::response_to_csv(resp));
    return 0;
}

int cmd_gain(const spa::project_config& cfg, artifact_sink& sink, bool sweep_pump,
             bool compression) {
    auto spec = need_synthesis(cfg);
    auto net = spa::synthesize_matching(spec);
    auto array = pump_params(cfg, net);
    auto grid = spa::frequency_grid::linspace(cfg.gain.f_lo_hz, cfg.gain.f_hi_hz,
                                              cfg.gain.points);

    if (sweep_pump) {
        if (!(cfg.gain.pump_points >= 1) || !(cfg.gain.pump_lo_hz > 0.0))
            throw spa::validation_error("gain.pump_lo_hz/pump_hi_hz/pump_points required");
        std::vector<double> pumps;
        for (std::size_t i = 0; i < cfg.gain.pump_points; ++i) {
            double t = cfg.gain.pump_points == 1
                           ? 0.0
                           : static_cast<double>(i) / double(cfg.gain.pump_points - 1);
            pumps.push_back(cfg.gain.pump_lo_hz + t * (cfg.gain.pump_hi_hz - cfg.gain.pump_lo_hz));
        }
        auto sweep = spa::tunable_band_sweep(net, array, pumps, cfg.gain.gain_target_db, grid,
                                             cfg.gain.ripple_budget_db);
        std::string csv =
            "pump_hz,attained,c3_phi_p,peak_db,center_hz,bw_3db_hz,bw_ripple_hz,ripple_db\n";
        for (const auto& pt : sweep) {
            csv += fmt(pt.pump_freq) + "," + (pt.attained ? "1" : "0") + "," +
                   fmt(pt.c3_phi_p) + "," + fmt(pt.metrics.peak_db) + "," +
                   fmt(pt.metrics.center_hz) + "," + fmt(pt.metrics.bw_3db_hz) + "," +
                   fmt(pt.metrics.bw_ripple_hz) + "," + fmt(pt.metrics.ripple_db) + "\n";
            std::printf("pump %.4f GHz: %s, 3 dB BW %.1f MHz\n", pt.pump_freq / 1e9,
                        pt.attained ? "ok" : "target not attained",
                        pt.metrics.bw_3db_hz / 1e6);
        }
        sink.add("gain_pump_sweep.csv", csv);
        return 0;
    }

    if (compression) {
        if (cfg.gain.input_powers_dbm.empty())
            throw spa::validation_error("gain.input_powers_dbm required for --compression");
        std::vector<double> powers_w;
        for (double dbm : cfg.gain.input_powers_dbm)
            powers_w.push_back(1e-3 * std::pow(10.0, dbm / 10.0));
        auto res = spa::compression_sweep(net, array, cfg.gain.stark_coeff_per_w, powers_w, grid);
        sink.add("gain_compression.csv",
                 spa::gain_to_csv(res.profiles, cfg.gain.input_powers_dbm));
        std::string p1 = "freq_hz,p1db_dbm\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            p1 += fmt(grid.points[i]) + "," +
                  (std::isnan(res.p1db_dbm[i]) ? std::string("not_reached")
                                               : fmt(res.p1db_dbm[i])) +
                  "\n";
        sink.add("p1db.csv", p1);
        std::printf("compression sweep over %zu power(s) done\n", powers_w.size());
        return 0;
    }

    auto profile = spa::evaluate_gain(net, array, grid);
    auto m = spa::compute_flat_top_metrics(profile, cfg.gain.ripple_budget_db);
    std::printf("peak %.2f dB at center %.4f GHz, 3 dB BW %.1f MHz, "
                "ripple band %.1f MHz (ripple %.3f dB)\n",
                m.peak_db, m.center_hz / 1e9, m.bw_3db_hz / 1e6, m.bw_ripple_hz / 1e6,
                m.ripple_db);
    sink.add("gain.csv", spa::gain_to_csv(profile));
    return 0;
}

spa::imd_options need_imd(const spa::project_config& cfg) {
    if (!cfg.imd) throw spa::validation_error("config is missing the 'imd' section");
    return *cfg.imd;
}

int cmd_imd_enumerate(const spa::project_config& cfg, artifact_sink& sink) {
    auto im = need_imd(cfg);
    auto products =
        spa::enumerate_products(im.tones, im.max_order, {im.band_lo_hz, im.band_hi_hz});
    std::string csv = "freq_hz,power_dbm,n_p,n_1,n_2,order\n";
    for (const auto& p : products) {
        csv += fmt(p.freq_hz) + ",,";
        csv += std::to_string(p.label.n_p);
        for (int n : p.label.n_sig) csv += "," + std::to_string(n);
        csv += "," + std::to_string(p.order) + "\n";
    }
    sink.add("imd_products.csv", csv);
    std::printf("%zu in-band products (order <= %d)\n", products.size(), im.max_order);
    return 0;
}

int cmd_imd_collide(const spa::project_config& cfg, artifact_sink& sink) {
    auto im = need_imd(cfg);
    if (im.channels.empty()) throw spa::validation_error("imd.channels required for collide");
    auto report = spa::collision_scan(im.tones, im.channels, im.max_order);
    std::string csv = "freq_hz,channel,detuning_hz,n_p,n_1,n_2,order\n";
    for (const auto& e : report.entries) {
        csv += fmt(e.product.freq_hz) + "," + std::to_string(e.channel_index) + "," +
               fmt(e.detuning_hz) + "," + std::to_string(e.product.label.n_p);
        for (int n : e.product.label.n_sig) csv += "," + std::to_string(n);
        csv += "," + std::to_string(e.product.order) + "\n";
        std::printf("collision: %.6f GHz hits channel %zu (detuning %+.3f MHz, order %d)\n",
                    e.product.freq_hz / 1e9, e.channel_index, e.detuning_hz / 1e6,
                    e.product.order);
    }
    if (report.entries.empty()) std::printf("no collisions within acquisition bandwidth\n");
    sink.add("imd_collisions.csv", csv);
    return 0;
}

int cmd_imd_spectrum(const spa::project_config& cfg, artifact_sink& sink) {
    auto im = need_imd(cfg);
    auto lines = spa::mixer_spectrum(im.tones, im.a3, im.a5, nullptr);
    std::string csv = "freq_hz,power_dbm,n_p,n_1,n_2,order\n";
    for (const auto& l : lines) csv += fmt(l.freq_hz) + "," + fmt(l.power_dbm) + ",,,,\n";
    sink.add("imd_spectrum.csv", csv);
    std::printf("%zu output lines\n", lines.size());
    return 0;
}

int cmd_imd_fit(const spa::project_config& cfg, artifact_sink& sink) {
    auto im = need_imd(cfg);
    if (im.tones.tones.size() < 2)
        throw spa::validation_error("imd fit needs two tones in imd.tones");
    if (im.a3 == 0.0) throw spa::validation_error("imd fit needs a nonzero imd.a3");
    if (im.sweep_points < 5) throw spa::validation_error("imd.sweep_points must be >= 5");

    double f1 = im.tones.tones[0].freq_hz, f2 = im.tones.tones[1].freq_hz;
    double f_im3 = 2.0 * f1 - f2;
    std::vector<spa::power_sweep_row> rows;
    for (std::size_t i = 0; i < im.sweep_points; ++i) {
        double t = im.sweep_points == 1
                       ? 0.0
                       : static_cast<double>(i) / double(im.sweep_points - 1);
        double p_in = im.sweep_lo_dbm + t * (im.sweep_hi_dbm - im.sweep_lo_dbm);
        spa::tone_set ts = im.tones;
        ts.tones[0].power_dbm = p_in;
        ts.tones[1].power_dbm = p_in;
        auto lines = spa::mixer_spectrum(ts, im.a3, im.a5, nullptr);
        auto power_at = [&](double f) {
            for (const auto& l : lines)
                if (std::abs(l.freq_hz - f) <= 1.0) return l.power_dbm;
            return -400.0;
        };
        rows.push_back({p_in, power_at(f1), power_at(f_im3), std::nullopt});
    }
    auto fitres = spa::fit_power_laws(rows);
    std::printf("IIP3 = %.2f dBm", fitres.iip3_dbm);
    if (fitres.p1db_dbm)
        std::printf(", P1dB = %.2f dBm\n", *fitres.p1db_dbm);
    else
        std::printf(", P1dB not reached\n");

    json j;
    j["iip3_dbm"] = fitres.iip3_dbm;
    if (fitres.p1db_dbm) j["p1db_dbm"] = *fitres.p1db_dbm;
    j["signal_fit"] = {{"slope", fitres.signal.slope},
                       {"intercept_dbm", fitres.signal.intercept_dbm},
                       {"residual_db", fitres.signal.residual_db}};
    j["im3_fit"] = {{"slope", fitres.im3.slope},
                    {"intercept_dbm", fitres.im3.intercept_dbm},
                    {"residual_db", fitres.im3.residual_db}};
    if (fitres.iip5_dbm) {
        j["iip5_dbm"] = *fitres.iip5_dbm;
        j["iip5_low_confidence"] = true;
    }
    sink.add("imd_fit.json", j.dump(2) + "\n");
    return 0;
}

spa::readout_options need_readout(const spa::project_config& cfg) {
    if (!cfg.readout) throw spa::validation_error("config is missing the 'readout' section");
    return *cfg.readout;
}

int cmd_readout_simulate(const spa::project_config& cfg, artifact_sink& sink, bool records) {
    auto ro = need_readout(cfg);
    auto exp = spa::simulate_experiment(ro.request);
    json j;
    j["n_preps"] = exp.preps.size();
    j["n_channels"] = ro.request.systems.size();
    j["n_traj"] = ro.request.n_traj;
    j["samples_per_record"] = exp.records[0][0][0].samples.size();
    for (std::size_t c = 0; c < ro.request.systems.size(); ++c) {
        auto ps = spa::pointer_states(ro.request.systems[c], ro.request.drive_amps[c]);
        j["pointer_states"].push_back({{"alpha_g", {ps.alpha_g.real(), ps.alpha_g.imag()}},
                                       {"alpha_e", {ps.alpha_e.real(), ps.alpha_e.imag()}}});
    }
    sink.add("readout_summary.json", j.dump(2) + "\n");
    if (records) {
        // Per-trajectory CSV export of the first preparation, first channel
        // (full dumps grow quickly; summary mode is the default).
        std::string csv = "t_s,re_i,im_q\n";
        const auto& rec = exp.records[0][0][0];
        for (std::size_t n = 0; n < rec.samples.size(); ++n)
            csv += fmt((double(n) + 1.0) * rec.timestep) + "," + fmt(rec.samples[n].real()) +
                   "," + fmt(rec.samples[n].imag()) + "\n";
        sink.add("readout_record_prep0_ch0_traj0.csv", csv);
    }
    std::printf("simulated %zu preparation(s) x %zu channel(s) x %zu trajectories\n",
                exp.preps.size(), ro.request.systems.size(), ro.request.n_traj);
    return 0;
}

int cmd_readout_classify(const spa::project_config& cfg, artifact_sink& sink) {
    auto ro = need_readout(cfg);
    auto exp = spa::simulate_experiment(ro.request);
    auto report = spa::demodulate_and_classify(exp, ro.filter_cutoff_hz, ro.filter_order);
    for (std::size_t c = 0; c < report.channels.size(); ++c)
        std::printf("channel %zu: fidelity %.4f%s\n", c + 1, report.channels[c].fidelity,
                    report.channels[c].degenerate ? " (degenerate blobs)" : "");
    if (report.eps12) std::printf("eps12 = %+.5f\n", *report.eps12);
    sink.add("fidelity_report.json", spa::fidelity_report_to_json(report));
    return 0;
}

int cmd_readout_budget(const spa::project_config& cfg, artifact_sink& sink) {
    auto ro = need_readout(cfg);
    auto nb = spa::noise_budget_solve(ro.g_spa_db, ro.nvr_db, ro.eta_corr);
    std::printf("n_spa = %.3f photons, n_sys = %.2f photons\n", nb.n_spa, nb.n_sys);
    json j = {{"g_spa", nb.g_spa},       {"nvr", nb.nvr},   {"eta_corr", nb.eta_corr},
              {"n_q", nb.n_q},           {"n_spa", nb.n_spa}, {"n_sys", nb.n_sys}};
    if (ro.request.eta.size() >= 2) {
        double da = spa::delta_a_db(ro.request.eta[0], ro.request.eta[1]);
        std::printf("delta_A(eta1/eta2) = %.3f dB\n", da);
        j["delta_a_db"] = da;
    }
    sink.add("noise_budget.json", j.dump(2) + "\n");
    return 0;
}

int cmd_report(const spa::project_config& cfg, artifact_sink& sink) {
    json j;

    auto spec = need_synthesis(cfg);
    auto net = spa::synthesize_matching(spec);
    j["synthesis"] = {{"l2_nH", net.l2 * 1e9},
                      {"c12_pF", net.c12 * 1e12},
                      {"c1_pF", net.c1 * 1e12},
                      {"c2_pF", net.c2 * 1e12}};

    auto array = pump_params(cfg, net);
    auto grid = spa::frequency_grid::linspace(cfg.gain.f_lo_hz, cfg.gain.f_hi_hz,
                                              cfg.gain.points);
    auto m = spa::compute_flat_top_metrics(spa::evaluate_gain(net, array, grid),
                                           cfg.gain.ripple_budget_db);
    j["gain"] = {{"peak_db", m.peak_db},
                 {"center_ghz", m.center_hz / 1e9},
                 {"bw_3db_mhz", m.bw_3db_hz / 1e6},
                 {"ripple_db", m.ripple_db}};

    if (cfg.imd && !cfg.imd->channels.empty()) {
        auto report = spa::collision_scan(cfg.imd->tones, cfg.imd->channels, cfg.imd->max_order);
        j["imd"] = {{"collisions", report.entries.size()}};
    }

    if (cfg.readout) {
        auto ro = *cfg.readout;
        auto exp = spa::simulate_experiment(ro.request);
        auto rep = spa::demodulate_and_classify(exp, ro.filter_cutoff_hz, ro.filter_order);
        for (const auto& c : rep.channels) j["readout"]["fidelity"].push_back(c.fidelity);
        if (rep.eps12) j["readout"]["eps12"] = *rep.eps12;
        auto nb = spa::noise_budget_solve(ro.g_spa_db, ro.nvr_db, ro.eta_corr);
        j["readout"]["n_spa_photons"] = nb.n_spa;
    }

    sink.add("report.json", j.dump(2) + "\n");
    std::printf("report summary:\n%s\n", j.dump(2).c_str());
    return 0;
}

// Extract dotted-path overrides (--section.key value) before CLI11 parsing.
std::vector<std::string> extract_overrides(std::vector<std::string>& args) {
    std::vector<std::string> overrides;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0 && a.find('.') != std::string::npos) {
            std::string path = a.substr(2);
            std::string value;
            auto eq = path.find('=');
            if (eq != std::string::npos) {
                value = path.substr(eq + 1);
                path = path.substr(0, eq);
            } else if (i + 1 < args.size()) {
                value = args[++i];
            } else {
                throw spa::validation_error("override " + a + " needs a value");
            }
            overrides.push_back(path + "=" + value);
        } else {
            kept.push_back(a);
        }
    }
    args = kept;
    return overrides;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> overrides;
    try {
        overrides = extract_overrides(args);
    } catch (const spa::validation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    CLI::App app{"negative-resistance parametric amplifier design toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::string out_dir_override;
    bool dry_run = false;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_dir_override, "override output directory");
    app.add_flag("--dry-run", dry_run, "validate config and print the plan, write nothing");

    auto* c_synth = app.add_subcommand("synthesize", "matching-network synthesis");
    auto* c_pf = app.add_subcommand("pump-filter", "pump-port bandpass synthesis");
    auto* c_gain = app.add_subcommand("gain", "gain profile and metrics");
    bool sweep_pump = false, compression = false;
    c_gain->add_flag("--sweep-pump", sweep_pump, "tunable-band pump sweep");
    c_gain->add_flag("--compression", compression, "compression power sweep");
    auto* c_imd = app.add_subcommand("imd", "intermodulation analysis");
    c_imd->require_subcommand(1);
    auto* c_imd_enum = c_imd->add_subcommand("enumerate", "mixing-product enumeration");
    auto* c_imd_spec = c_imd->add_subcommand("spectrum", "polynomial mixer spectrum");
    auto* c_imd_fit = c_imd->add_subcommand("fit", "power-law fits (IIP3, P1dB)");
    auto* c_imd_coll = c_imd->add_subcommand("collide", "readout-channel collision scan");
    double pump_hz_override = 0.0;
    c_imd_coll->add_option("--pump-hz", pump_hz_override, "override imd pump frequency (Hz)");
    auto* c_ro = app.add_subcommand("readout", "multiplexed readout simulation");
    c_ro->require_subcommand(1);
    bool ro_records = false;
    auto* c_ro_sim = c_ro->add_subcommand("simulate", "generate heterodyne records");
    c_ro_sim->add_flag("--records", ro_records, "export a sample trajectory CSV");
    auto* c_ro_cls = c_ro->add_subcommand("classify", "demodulate and classify");
    auto* c_ro_bud = c_ro->add_subcommand("budget", "noise budget algebra");
    auto* c_report = app.add_subcommand("report", "chained headline summary");

    try {
        // CLI11's vector overload consumes the arguments as a stack.
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (pump_hz_override > 0.0)
            overrides.push_back("imd.pump_freq_hz=" + fmt(pump_hz_override));
        spa::project_config cfg = spa::project_config::load(config_path, overrides);

        artifact_sink sink;
        sink.out_dir = out_dir_override.empty() ? cfg.output_dir : out_dir_override;
        sink.dry_run = dry_run;

        int rc = 0;
        if (dry_run) std::printf("config OK: %s\n", config_path.c_str());
        if (c_synth->parsed()) rc = cmd_synthesize(cfg, sink);
        else if (c_pf->parsed()) rc = cmd_pump_filter(cfg, sink);
        else if (c_gain->parsed()) rc = cmd_gain(cfg, sink, sweep_pump, compression);
        else if (c_imd->parsed()) {
            if (c_imd_enum->parsed()) rc = cmd_imd_enumerate(cfg, sink);
            else if (c_imd_spec->parsed()) rc = cmd_imd_spectrum(cfg, sink);
            else if (c_imd_fit->parsed()) rc = cmd_imd_fit(cfg, sink);
            else if (c_imd_coll->parsed()) rc = cmd_imd_collide(cfg, sink);
        } else if (c_ro->parsed()) {
            if (c_ro_sim->parsed()) rc = cmd_readout_simulate(cfg, sink, ro_records);
            else if (c_ro_cls->parsed()) rc = cmd_readout_classify(cfg, sink);
            else if (c_ro_bud->parsed()) rc = cmd_readout_budget(cfg, sink);
        } else if (c_report->parsed()) {
            rc = cmd_report(cfg, sink);
        }
        sink.flush();
        return rc;
    } catch (const spa::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const spa::numerical_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const spa::infeasible_error& e) {
        std::fprintf(stderr, "infeasible synthesis: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
