#include "eerelay/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace eerelay {

void SystemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw config_error("config: " + msg); };
    if (bandwidth_b <= 0) fail("bandwidth_b must be > 0");
    if (coherence_bandwidth_bc <= 0 || coherence_time_tc <= 0)
        fail("coherence bandwidth/time must be > 0");
    if (!(r_min > 0) || !(r_min < r_max)) fail("need 0 < r_min < r_max");
    if (!(pathloss_exp_alpha > 2.0)) fail("pathloss_exp_alpha must be > 2");
    if (pathloss_ref_c <= 0) fail("pathloss_ref_c must be > 0");
    if (!(pa_eff_relay_eta > 0 && pa_eff_relay_eta < 1)) fail("pa_eff_relay_eta in (0,1)");
    if (!(pa_eff_device_eta > 0 && pa_eff_device_eta < 1)) fail("pa_eff_device_eta in (0,1)");
    for (auto [v, name] : {std::pair{device_tx_power_ptxd, "device_tx_power_ptxd"},
                           {relay_max_power_prmax, "relay_max_power_prmax"},
                           {noise_power_total, "noise_power_total"},
                           {p_fix, "p_fix"},
                           {p_relay_per_antenna, "p_relay_per_antenna"},
                           {p_device, "p_device"},
                           {p_syn, "p_syn"},
                           {pilot_power_w, "pilot_power_w"}}) {
        if (v < 0) fail(std::string(name) + " must be >= 0");
    }
    if (noise_power_total <= 0) fail("noise_power_total must be > 0");
    if (pilot_snr_rho_r < 0) fail("pilot_snr_rho_r must be >= 0");
    if (pilot_snr_scale <= 0) fail("pilot_snr_scale must be > 0");
    if (compute_eff_lr <= 0) fail("compute_eff_lr must be > 0");
    if (qos_floor_r0 < 0) fail("qos_floor_r0 must be >= 0");
    if (num_pairs_k < 1) fail("num_pairs_k must be >= 1");
    if (num_antennas_m <= num_pairs_k) fail("need num_antennas_m > num_pairs_k");
    if (m_max < 2) fail("m_max must be >= 2");
    if (!(2.0 * num_pairs_k < coherence_symbols())) fail("need 2K < T (rate prelog)");
}

namespace {

using setter = std::function<void(SystemConfig&, double)>;

const std::map<std::string, setter, std::less<>>& key_table() {
    static const std::map<std::string, setter, std::less<>> table = {
        {"bandwidth_b", [](SystemConfig& c, double v) { c.bandwidth_b = v; }},
        {"coherence_bandwidth_bc", [](SystemConfig& c, double v) { c.coherence_bandwidth_bc = v; }},
        {"coherence_time_tc", [](SystemConfig& c, double v) { c.coherence_time_tc = v; }},
        {"device_tx_power_ptxd", [](SystemConfig& c, double v) { c.device_tx_power_ptxd = v; }},
        {"relay_max_power_prmax", [](SystemConfig& c, double v) { c.relay_max_power_prmax = v; }},
        {"pilot_snr_rho_r", [](SystemConfig& c, double v) { c.pilot_snr_rho_r = v; }},
        {"pilot_length_tau_r", [](SystemConfig& c, double v) { c.pilot_length_tau_r = v; }},
        {"noise_power_total", [](SystemConfig& c, double v) { c.noise_power_total = v; }},
        {"pa_eff_relay_eta", [](SystemConfig& c, double v) { c.pa_eff_relay_eta = v; }},
        {"pa_eff_device_eta", [](SystemConfig& c, double v) { c.pa_eff_device_eta = v; }},
        {"p_fix", [](SystemConfig& c, double v) { c.p_fix = v; }},
        {"p_relay_per_antenna", [](SystemConfig& c, double v) { c.p_relay_per_antenna = v; }},
        {"p_device", [](SystemConfig& c, double v) { c.p_device = v; }},
        {"p_syn", [](SystemConfig& c, double v) { c.p_syn = v; }},
        {"compute_eff_lr", [](SystemConfig& c, double v) { c.compute_eff_lr = v; }},
        {"r_min", [](SystemConfig& c, double v) { c.r_min = v; }},
        {"r_max", [](SystemConfig& c, double v) { c.r_max = v; }},
        {"pathloss_exp_alpha", [](SystemConfig& c, double v) { c.pathloss_exp_alpha = v; }},
        {"pathloss_ref_c", [](SystemConfig& c, double v) { c.pathloss_ref_c = v; }},
        {"qos_floor_r0", [](SystemConfig& c, double v) { c.qos_floor_r0 = v; }},
        {"m_max", [](SystemConfig& c, double v) { c.m_max = static_cast<int>(v); }},
        {"num_pairs_k", [](SystemConfig& c, double v) { c.num_pairs_k = static_cast<int>(v); }},
        {"num_antennas_m", [](SystemConfig& c, double v) { c.num_antennas_m = static_cast<int>(v); }},
        {"pilot_snr_scale", [](SystemConfig& c, double v) { c.pilot_snr_scale = v; }},
        {"pilot_power_w", [](SystemConfig& c, double v) { c.pilot_power_w = v; }},
    };
    return table;
}

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    auto end = s.find_last_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    return std::string(s.substr(begin, end - begin + 1));
}

double parse_number(std::string_view key, const std::string& text) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value '" + text + "' for key '" +
                           std::string(key) + "'");
    }
}

}  // namespace

void apply_override(SystemConfig& cfg, std::string_view key, std::string_view value) {
    std::string k = trim(key);
    std::string v = trim(value);
    // dBm convenience spelling for watt-valued keys; conversion happens only
    // here at the boundary, storage stays in watts.
    bool dbm = false;
    if (k.size() > 4 && k.ends_with("_dbm")) {
        k = k.substr(0, k.size() - 4);
        if (k == "device_tx_power_ptxd" || k == "relay_max_power_prmax" ||
            k == "pilot_power" || k == "noise_power_total") {
            if (k == "pilot_power") k = "pilot_power_w";
            dbm = true;
        } else {
            throw config_error("config: unknown key '" + std::string(key) + "'");
        }
    }
    if (k == "pilot_power") k = "pilot_power_w";
    auto it = key_table().find(k);
    if (it == key_table().end())
        throw config_error("config: unknown key '" + std::string(key) + "'");
    double num = parse_number(k, v);
    it->second(cfg, dbm ? dbm_to_watt(num) : num);
}

void apply_override(SystemConfig& cfg, std::string_view key_equals_value) {
    auto eq = key_equals_value.find('=');
    if (eq == std::string_view::npos)
        throw config_error("config: override must look like key=value, got '" +
                           std::string(key_equals_value) + "'");
    apply_override(cfg, key_equals_value.substr(0, eq), key_equals_value.substr(eq + 1));
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    SystemConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config: " + path + ":" + std::to_string(lineno) +
                               ": expected key = value");
        apply_override(cfg, std::string_view(t).substr(0, eq),
                       std::string_view(t).substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

}  // namespace eerelay
