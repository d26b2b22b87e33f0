#pragma once

#include <string>

#include "spa/gain.hpp"
#include "spa/netlist.hpp"
#include "spa/readout.hpp"

namespace spa {

std::string netlist_to_json(const ladder_network& net);
ladder_network netlist_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV with header freq_hz,re_s11,im_s11,re_s21,im_s21.
std::string response_to_csv(const two_port_response& resp);

// CSV with header freq_hz,gain_db,phase_deg[,power_dbm].
std::string gain_to_csv(const gain_profile& p);
std::string gain_to_csv(const std::vector<gain_profile>& profiles,
                        const std::vector<double>& powers_dbm);

std::string fidelity_report_to_json(const fidelity_report& r);

}  // namespace spa
