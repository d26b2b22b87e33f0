#include "spa/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spa {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* kind_letter(element_kind k) {
    switch (k) {
        case element_kind::inductor: return "L";
        case element_kind::capacitor: return "C";
        case element_kind::resistor: return "R";
    }
    return "?";
}

const char* value_key(element_kind k) {
    switch (k) {
        case element_kind::inductor: return "value_H";
        case element_kind::capacitor: return "value_F";
        case element_kind::resistor: return "value_ohm";
    }
    return "value";
}

}  // namespace

std::string netlist_to_json(const ladder_network& net) {
    json j;
    j["elements"] = json::array();
    for (const auto& e : net.elements) {
        json je;
        je["kind"] = kind_letter(e.kind);
        je["topology"] = (e.topo == topology::series) ? "series" : "shunt";
        je[value_key(e.kind)] = e.value;
        j["elements"].push_back(je);
    }
    j["z0"] = {net.z0[0], net.z0[1]};
    return j.dump(2) + "\n";
}

ladder_network netlist_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("netlist JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
        throw validation_error("netlist JSON must contain an 'elements' array");

    ladder_network net;
    for (const auto& je : j["elements"]) {
        lumped_element e;
        std::string kind = je.value("kind", "");
        if (kind == "L")
            e.kind = element_kind::inductor;
        else if (kind == "C")
            e.kind = element_kind::capacitor;
        else if (kind == "R")
            e.kind = element_kind::resistor;
        else
            throw validation_error("netlist element kind must be L, C, or R");
        std::string topo = je.value("topology", "");
        if (topo == "series")
            e.topo = topology::series;
        else if (topo == "shunt")
            e.topo = topology::shunt;
        else
            throw validation_error("netlist element topology must be series or shunt");
        const char* key = value_key(e.kind);
        if (!je.contains(key) || !je[key].is_number())
            throw validation_error(std::string("netlist element missing numeric ") + key);
        e.value = je[key].get<double>();
        net.elements.push_back(e);
    }
    if (j.contains("z0")) {
        if (!j["z0"].is_array() || j["z0"].size() != 2)
            throw validation_error("netlist z0 must be a two-element array");
        net.z0 = {j["z0"][0].get<double>(), j["z0"][1].get<double>()};
    }
    net.validate();
    return net;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw validation_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string response_to_csv(const two_port_response& resp) {
    std::string out = "freq_hz,re_s11,im_s11,re_s21,im_s21\n";
    for (std::size_t i = 0; i < resp.grid.size(); ++i) {
        out += fmt(resp.grid.points[i]) + "," + fmt(resp.s11[i].real()) + "," +
               fmt(resp.s11[i].imag()) + "," + fmt(resp.s21[i].real()) + "," +
               fmt(resp.s21[i].imag()) + "\n";
    }
    return out;
}

std::string gain_to_csv(const gain_profile& p) {
    std::string out = "freq_hz,gain_db,phase_deg\n";
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        out += fmt(p.grid.points[i]) + "," + fmt(p.gain_db[i]) + "," + fmt(p.phase_deg[i]) + "\n";
    return out;
}

std::string gain_to_csv(const std::vector<gain_profile>& profiles,
                        const std::vector<double>& powers_dbm) {
    if (profiles.size() != powers_dbm.size())
        throw validation_error("profiles/powers length mismatch");
    std::string out = "freq_hz,gain_db,phase_deg,power_dbm\n";
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const auto& p = profiles[k];
        for (std::size_t i = 0; i < p.grid.size(); ++i)
            out += fmt(p.grid.points[i]) + "," + fmt(p.gain_db[i]) + "," +
                   fmt(p.phase_deg[i]) + "," + fmt(powers_dbm[k]) + "\n";
    }
    return out;
}

std::string fidelity_report_to_json(const fidelity_report& r) {
    json j;
    j["channels"] = json::array();
    for (const auto& c : r.channels) {
        json jc;
        jc["fidelity"] = c.fidelity;
        jc["threshold"] = c.threshold;
        jc["blob_mean_g"] = {c.blob_mean_g.real(), c.blob_mean_g.imag()};
        jc["blob_mean_e"] = {c.blob_mean_e.real(), c.blob_mean_e.imag()};
        jc["var_g"] = c.var_g;
        jc["var_e"] = c.var_e;
        jc["degenerate"] = c.degenerate;
        j["channels"].push_back(jc);
    }
    if (r.eps12) j["eps12"] = *r.eps12;
    return j.dump(2) + "\n";
}

}  // namespace spa
