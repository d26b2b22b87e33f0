#include "spa/imd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

namespace spa {

namespace {
constexpr double line_z0 = 50.0;  // reference impedance for dBm conversion
constexpr int max_pump_harmonic = 3;
}

void tone_set::validate() const {
    if (!(pump_freq > 0.0)) throw validation_error("pump_freq must be positive");
    for (std::size_t i = 0; i < tones.size(); ++i) {
        if (!(tones[i].freq_hz > 0.0)) throw validation_error("tone frequencies must be positive");
        if (!std::isfinite(tones[i].power_dbm))
            throw validation_error("tone powers must be finite");
        for (std::size_t j = 0; j < i; ++j)
            if (tones[i].freq_hz == tones[j].freq_hz)
                throw validation_error("tone frequencies must be distinct");
    }
}

int product_label::order() const {
    int o = 0;
    for (int n : n_sig) o += std::abs(n);
    return o;
}

namespace {

bool label_less(const product_label& a, const product_label& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    if (a.n_p != b.n_p) return a.n_p < b.n_p;
    return a.n_sig < b.n_sig;
}

void enumerate_signal_part(const tone_set& t, int max_order, std::size_t idx, int budget,
                           double freq_acc, std::vector<int>& current,
                           const std::function<void(double, const std::vector<int>&)>& emit) {
    if (idx == t.tones.size()) {
        emit(freq_acc, current);
        return;
    }
    for (int n = -budget; n <= budget; ++n) {
        current[idx] = n;
        enumerate_signal_part(t, max_order, idx + 1, budget - std::abs(n),
                              freq_acc + n * t.tones[idx].freq_hz, current, emit);
    }
    current[idx] = 0;
}

}  // namespace

std::vector<mixing_product> enumerate_products(const tone_set& t, int max_order,
                                               std::pair<double, double> band) {
    t.validate();
    if (max_order < 1) throw validation_error("max_order must be >= 1");
    if (!(band.first < band.second)) throw validation_error("band must satisfy lo < hi");

    std::map<std::int64_t, mixing_product> by_freq;  // keyed at 1 Hz resolution
    std::vector<int> current(t.tones.size(), 0);
    for (int n_p = -max_pump_harmonic; n_p <= max_pump_harmonic; ++n_p) {
        enumerate_signal_part(
            t, max_order, 0, max_order, n_p * t.pump_freq, current,
            [&](double freq, const std::vector<int>& n_sig) {
                if (!(freq > 0.0) || freq < band.first || freq > band.second) return;
                product_label lab{n_p, n_sig};
                auto key = static_cast<std::int64_t>(std::llround(freq));
                auto it = by_freq.find(key);
                if (it == by_freq.end()) {
                    mixing_product mp;
                    mp.freq_hz = freq;
                    mp.label = lab;
                    mp.order = lab.order();
                    by_freq.emplace(key, std::move(mp));
                } else {
                    mixing_product& mp = it->second;
                    if (label_less(lab, mp.label)) {
                        mp.aliases.push_back(mp.label);
                        mp.label = lab;
                        mp.order = lab.order();
                        mp.freq_hz = freq;
                    } else {
                        mp.aliases.push_back(lab);
                    }
                }
            });
    }

    std::vector<mixing_product> out;
    out.reserve(by_freq.size());
    for (auto& [key, mp] : by_freq) out.push_back(std::move(mp));
    return out;  // map iteration is already frequency-ascending
}

collision_report collision_scan(const tone_set& t, const std::vector<readout_channel>& channels,
                                int max_order) {
    if (channels.empty()) throw validation_error("collision_scan requires channels");
    double lo = channels[0].freq_hz, hi = channels[0].freq_hz, bw_max = 0.0;
    for (const auto& ch : channels) {
        if (!(ch.freq_hz > 0.0) || !(ch.acq_bw_hz > 0.0))
            throw validation_error("channel frequency and acq_bw must be positive");
        lo = std::min(lo, ch.freq_hz - ch.acq_bw_hz);
        hi = std::max(hi, ch.freq_hz + ch.acq_bw_hz);
        bw_max = std::max(bw_max, ch.acq_bw_hz);
    }

    collision_report report;
    report.threshold_hz = bw_max;
    for (const auto& mp : enumerate_products(t, max_order, {lo, hi})) {
        for (std::size_t c = 0; c < channels.size(); ++c) {
            double det = mp.freq_hz - channels[c].freq_hz;
            if (std::abs(det) <= channels[c].acq_bw_hz)
                report.entries.push_back({mp, c, det});
        }
    }
    return report;
}

namespace {

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

// Multisets of `size` picks from `count` items, ascending indices.
void for_each_multiset(int count, int size, std::vector<int>& pick, int start,
                       const std::function<void(const std::vector<int>&)>& emit) {
    if (static_cast<int>(pick.size()) == size) {
        emit(pick);
        return;
    }
    for (int i = start; i < count; ++i) {
        pick.push_back(i);
        for_each_multiset(count, size, pick, i, emit);
        pick.pop_back();
    }
}

double multinomial(const std::vector<int>& pick) {
    // pick is sorted; coefficient = n!/prod(mult!)
    double fact[6] = {1, 1, 2, 6, 24, 120};
    double denom = 1.0;
    int run = 1;
    for (std::size_t i = 1; i <= pick.size(); ++i) {
        if (i < pick.size() && pick[i] == pick[i - 1]) {
            ++run;
        } else {
            denom *= fact[run];
            run = 1;
        }
    }
    return fact[pick.size()] / denom;
}

}  // namespace

std::vector<spectrum_line> mixer_spectrum(const tone_set& t, double a3, double a5,
                                          const gain_profile* gain) {
    t.validate();
    if (t.tones.size() > 8) throw validation_error("mixer_spectrum supports at most 8 tones");

    int n_exp = static_cast<int>(2 * t.tones.size());
    std::vector<double> freq(n_exp);
    std::vector<complex> amp(n_exp);
    for (std::size_t k = 0; k < t.tones.size(); ++k) {
        double v = std::sqrt(2.0 * line_z0 * dbm_to_watt(t.tones[k].power_dbm));
        freq[2 * k] = t.tones[k].freq_hz;
        freq[2 * k + 1] = -t.tones[k].freq_hz;
        amp[2 * k] = amp[2 * k + 1] = complex{0.5 * v, 0.0};
    }

    std::map<std::int64_t, complex> lines;
    auto add = [&](double f, complex c) {
        auto key = static_cast<std::int64_t>(std::llround(f));
        if (key <= 0) return;  // keep positive-frequency lines only
        lines[key] += c;
    };

    for (int k = 0; k < n_exp; ++k) add(freq[k], amp[k]);

    auto expand = [&](int size, double coeff) {
        std::vector<int> pick;
        for_each_multiset(n_exp, size, pick, 0, [&](const std::vector<int>& p) {
            double f = 0.0;
            complex c{coeff * multinomial(p), 0.0};
            for (int idx : p) {
                f += freq[idx];
                c *= amp[idx];
            }
            add(f, c);
        });
    };
    if (a3 != 0.0) expand(3, a3);
    if (a5 != 0.0) expand(5, a5);

    auto gain_db_at = [&](double f) {
        if (gain == nullptr || gain->grid.points.empty()) return 0.0;
        const auto& x = gain->grid.points;
        if (f <= x.front()) return gain->gain_db.front();
        if (f >= x.back()) return gain->gain_db.back();
        auto it = std::upper_bound(x.begin(), x.end(), f);
        std::size_t j = static_cast<std::size_t>(it - x.begin());
        double t01 = (f - x[j - 1]) / (x[j] - x[j - 1]);
        return gain->gain_db[j - 1] + t01 * (gain->gain_db[j] - gain->gain_db[j - 1]);
    };

    std::vector<spectrum_line> out;
    out.reserve(lines.size());
    for (const auto& [key, c] : lines) {
        double p_w = 2.0 * std::norm(c) / line_z0;
        if (p_w <= 0.0) continue;
        double f = static_cast<double>(key);
        out.push_back({f, watt_to_dbm(p_w) + gain_db_at(f)});
    }
    return out;
}

namespace {

struct fixed_slope_fit {
    double intercept = 0.0;
    double residual = 0.0;
    std::size_t len = 0;
};

// Largest low-power prefix with max residual < 0.5 dB for a fixed slope.
fixed_slope_fit fit_prefix(const std::vector<double>& x, const std::vector<double>& y,
                           double slope, const char* trace_name) {
    for (std::size_t len = x.size(); len >= 5; --len) {
        double b = 0.0;
        for (std::size_t i = 0; i < len; ++i) b += y[i] - slope * x[i];
        b /= static_cast<double>(len);
        double res = 0.0;
        for (std::size_t i = 0; i < len; ++i)
            res = std::max(res, std::abs(y[i] - (slope * x[i] + b)));
        if (res < 0.5) return {b, res, len};
    }
    throw numerical_error(std::string("fit_power_laws: no compliant low-power window for ") +
                          trace_name + " trace");
}

}  // namespace

power_law_result fit_power_laws(const std::vector<power_sweep_row>& sweep) {
    if (sweep.size() < 5)
        throw validation_error("fit_power_laws requires at least 5 sweep points");
    std::vector<power_sweep_row> rows = sweep;
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.p_in_dbm < b.p_in_dbm; });

    std::vector<double> x, y1, y3, y5;
    bool have_im5 = true;
    for (const auto& r : rows) {
        x.push_back(r.p_in_dbm);
        y1.push_back(r.p_sig_dbm);
        y3.push_back(r.p_im3_dbm);
        if (r.p_im5_dbm)
            y5.push_back(*r.p_im5_dbm);
        else
            have_im5 = false;
    }

    fixed_slope_fit f1 = fit_prefix(x, y1, 1.0, "signal");
    fixed_slope_fit f3 = fit_prefix(x, y3, 3.0, "im3");

    power_law_result res;
    res.signal = {1.0, f1.intercept, x.front(), x[f1.len - 1], f1.residual};
    res.im3 = {3.0, f3.intercept, x.front(), x[f3.len - 1], f3.residual};
    res.iip3_dbm = (f1.intercept - f3.intercept) / 2.0;

    // P_1dB: first crossing of 1 dB departure below the slope-1 line.
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dev = (x[i] + f1.intercept) - y1[i];
        if (dev >= 1.0) {
            if (i == 0) {
                res.p1db_dbm = x[0];
            } else {
                double dev_prev = (x[i - 1] + f1.intercept) - y1[i - 1];
                double t01 = (1.0 - dev_prev) / (dev - dev_prev);
                res.p1db_dbm = x[i - 1] + t01 * (x[i] - x[i - 1]);
            }
            break;
        }
    }

    if (have_im5 && y5.size() == x.size()) {
        try {
            fixed_slope_fit f5 = fit_prefix(x, y5, 5.0, "im5");
            res.iip5_dbm = (f1.intercept - f5.intercept) / 4.0;
            res.iip5_low_confidence = true;
        } catch (const numerical_error&) {
            res.iip5_dbm.reset();
        }
    }
    return res;
}

}  // namespace spa
