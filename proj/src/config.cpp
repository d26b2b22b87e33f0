#include "spa/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "spa/io.hpp"

namespace spa {

namespace {

using nlohmann::json;

constexpr double two_pi = 2.0 * std::numbers::pi;

// Key-tracking view over one JSON object: every accessed key is recorded and
// leftovers are rejected, so unknown keys fail loudly.
class section {
public:
    section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw validation_error("config section '" + name_ + "' must be an object");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return j_.contains(key);
    }

    double num(const std::string& key) {
        require(key);
        return as_num(key);
    }

    double num_or(const std::string& key, double fallback) {
        return has(key) ? as_num(key) : fallback;
    }

    std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        if (!j_[key].is_number_unsigned() && !j_[key].is_number_integer())
            throw validation_error("config field '" + path(key) + "' must be a nonnegative integer");
        auto v = j_[key].get<std::int64_t>();
        if (v < 0) throw validation_error("config field '" + path(key) + "' must be nonnegative");
        return static_cast<std::uint64_t>(v);
    }

    std::string str_or(const std::string& key, std::string fallback) {
        if (!has(key)) return fallback;
        if (!j_[key].is_string())
            throw validation_error("config field '" + path(key) + "' must be a string");
        return j_[key].get<std::string>();
    }

    const json& raw(const std::string& key) {
        require(key);
        return j_[key];
    }

    std::vector<double> num_list_or(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) return out;
        if (!j_[key].is_array())
            throw validation_error("config field '" + path(key) + "' must be an array");
        for (const auto& v : j_[key]) {
            if (!v.is_number())
                throw validation_error("config field '" + path(key) + "' must hold numbers");
            out.push_back(v.get<double>());
        }
        return out;
    }

    json sub_or_empty(const std::string& key) {
        if (!has(key)) return json::object();
        return j_[key];
    }

    void done() {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key()))
                throw validation_error("unknown config key '" + path(it.key()) + "'");
        }
    }

private:
    void require(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key))
            throw validation_error("missing config field '" + path(key) + "'");
    }
    double as_num(const std::string& key) {
        if (!j_[key].is_number())
            throw validation_error("config field '" + path(key) + "' must be a number");
        return j_[key].get<double>();
    }
    std::string path(const std::string& key) const {
        return name_.empty() ? key : name_ + "." + key;
    }

    const json& j_;
    std::string name_;
    std::set<std::string> used_;
};

json parse_override_value(const std::string& text) {
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) return json(text);  // fall back to string
    return v;
}

void apply_override(json& root, const std::string& spec_text) {
    auto eq = spec_text.find('=');
    if (eq == std::string::npos)
        throw validation_error("override must look like section.key=value: " + spec_text);
    std::string path = spec_text.substr(0, eq);
    json value = parse_override_value(spec_text.substr(eq + 1));

    json* node = &root;
    std::size_t pos = 0;
    while (true) {
        auto dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (key.empty()) throw validation_error("empty key in override path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
        node = &(*node)[key];
        pos = dot + 1;
    }
}

}  // namespace

project_config project_config::from_json(const std::string& text,
                                         const std::vector<std::string>& overrides) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) throw validation_error("config is not valid JSON");
    if (!root.is_object()) throw validation_error("config root must be an object");
    for (const auto& ov : overrides) apply_override(root, ov);

    project_config cfg;
    section top(root, "");
    cfg.seed = top.uint_or("seed", 1);

    if (top.has("synthesis")) {
        section s(top.raw("synthesis"), "synthesis");
        synthesis_spec spec;
        spec.f0 = s.num("f0_hz");
        spec.w = s.num("w");
        spec.z0 = s.num_or("z0_ohm", 50.0);
        spec.cc = s.num("cc_F");
        spec.l_array = s.num("l_array_H");
        if (s.has("prototype")) {
            section p(s.raw("prototype"), "synthesis.prototype");
            spec.prototype = {p.num("g1"), p.num("g2"), p.num("g3")};
            p.done();
        }
        s.done();
        spec.validate();
        cfg.synthesis = spec;
    }

    if (top.has("pump_filter")) {
        section s(top.raw("pump_filter"), "pump_filter");
        pump_filter_spec pf;
        pf.center_hz = s.num("center_hz");
        pf.passband_hz = s.num("passband_hz");
        pf.z0 = s.num_or("z0_ohm", 50.0);
        s.done();
        cfg.pump_filter = pf;
    }

    if (top.has("pump")) {
        section s(top.raw("pump"), "pump");
        pumped_array_params p;
        p.l_array = s.num("l_array_H");
        p.c1 = s.num("c1_F");
        p.z0 = s.num_or("z0_ohm", 50.0);
        p.c3_phi_p = s.num("c3_phi_p");
        p.pump_freq = s.num("pump_freq_hz");
        s.done();
        p.validate();
        cfg.pump = p;
    }

    if (top.has("gain")) {
        section s(top.raw("gain"), "gain");
        gain_options g;
        g.f_lo_hz = s.num_or("f_lo_hz", g.f_lo_hz);
        g.f_hi_hz = s.num_or("f_hi_hz", g.f_hi_hz);
        g.points = static_cast<std::size_t>(s.uint_or("points", g.points));
        g.ripple_budget_db = s.num_or("ripple_budget_db", g.ripple_budget_db);
        g.gain_target_db = s.num_or("gain_target_db", g.gain_target_db);
        g.pump_lo_hz = s.num_or("pump_lo_hz", 0.0);
        g.pump_hi_hz = s.num_or("pump_hi_hz", 0.0);
        g.pump_points = static_cast<std::size_t>(s.uint_or("pump_points", 0));
        g.stark_coeff_per_w = s.num_or("stark_coeff_per_w", 0.0);
        g.input_powers_dbm = s.num_list_or("input_powers_dbm");
        s.done();
        cfg.gain = g;
    }

    if (top.has("imd")) {
        section s(top.raw("imd"), "imd");
        imd_options im;
        const json& jt = s.raw("tones");
        if (!jt.is_array()) throw validation_error("imd.tones must be an array");
        for (const auto& t : jt) {
            section ts(t, "imd.tones[]");
            im.tones.tones.push_back({ts.num("freq_hz"), ts.num("power_dbm")});
            ts.done();
        }
        im.tones.pump_freq = s.num("pump_freq_hz");
        im.max_order = static_cast<int>(s.uint_or("max_order", 5));
        im.band_lo_hz = s.num_or("band_lo_hz", im.band_lo_hz);
        im.band_hi_hz = s.num_or("band_hi_hz", im.band_hi_hz);
        im.a3 = s.num_or("a3", 0.0);
        im.a5 = s.num_or("a5", 0.0);
        if (s.has("channels")) {
            const json& jc = s.raw("channels");
            if (!jc.is_array()) throw validation_error("imd.channels must be an array");
            for (const auto& c : jc) {
                section cs(c, "imd.channels[]");
                im.channels.push_back({cs.num("freq_hz"), cs.num("acq_bw_hz")});
                cs.done();
            }
        }
        im.sweep_lo_dbm = s.num_or("sweep_lo_dbm", im.sweep_lo_dbm);
        im.sweep_hi_dbm = s.num_or("sweep_hi_dbm", im.sweep_hi_dbm);
        im.sweep_points = static_cast<std::size_t>(s.uint_or("sweep_points", im.sweep_points));
        s.done();
        im.tones.validate();
        cfg.imd = im;
    }

    if (top.has("readout")) {
        section s(top.raw("readout"), "readout");
        readout_options ro;
        const json& js = s.raw("systems");
        if (!js.is_array()) throw validation_error("readout.systems must be an array");
        for (const auto& sys_j : js) {
            section ss(sys_j, "readout.systems[]");
            dispersive_system d;
            d.readout_freq = ss.num("readout_freq_hz");
            d.kappa = two_pi * ss.num("kappa_hz");
            d.kappa_ext = two_pi * ss.num_or("kappa_ext_hz", d.kappa / two_pi);
            d.chi = two_pi * ss.num("chi_hz");
            d.t1 = ss.num("t1_s");
            d.drive_detuning = two_pi * ss.num_or("drive_detuning_hz", 0.0);
            ss.done();
            d.validate();
            ro.request.systems.push_back(d);
        }
        ro.request.drive_amps = s.num_list_or("drive_amps");
        ro.request.eta = s.num_list_or("eta");
        ro.request.duration = s.num("duration_s");
        ro.request.timestep = s.num("timestep_s");
        ro.request.n_traj = static_cast<std::size_t>(s.uint_or("n_traj", 1000));
        if (s.has("injected")) {
            const json& ji = s.raw("injected");
            if (!ji.is_array()) throw validation_error("readout.injected must be an array");
            for (const auto& l : ji) {
                section ls(l, "readout.injected[]");
                ro.request.injected.push_back(
                    {ls.num("freq_hz"), ls.num("amp"), ls.num_or("phase", 0.0)});
                ls.done();
            }
        }
        ro.filter_cutoff_hz = s.num_or("filter_cutoff_hz", ro.filter_cutoff_hz);
        ro.filter_order = static_cast<int>(s.uint_or("filter_order", 4));
        ro.g_spa_db = s.num_or("g_spa_db", ro.g_spa_db);
        ro.nvr_db = s.num_or("nvr_db", ro.nvr_db);
        ro.eta_corr = s.num_or("eta_corr", ro.eta_corr);
        s.done();
        ro.request.seed = cfg.seed;
        cfg.readout = ro;
    }

    if (top.has("output")) {
        section s(top.raw("output"), "output");
        cfg.output_dir = s.str_or("dir", cfg.output_dir);
        s.done();
    }

    top.done();
    return cfg;
}

project_config project_config::load(const std::string& path,
                                    const std::vector<std::string>& overrides) {
    return from_json(read_text_file(path), overrides);
}

}  // namespace spa
