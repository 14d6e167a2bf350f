#include "eerelay/power.hpp"

namespace eerelay {

double rate_prelog(const SystemConfig& config, int num_pairs) {
    return 1.0 - config.tau_r(num_pairs) / config.coherence_symbols();
}

namespace {

// P_PA and the M-independent/M-linear parts of P_C, shared by both entry
// points so the affine split stays exactly consistent with total_power.
struct Parts {
    double p_pa;
    double p_tc_const;  // 2K*P_d + P_SYN
    double p_sig_const; // K^3 term
    double p_cm;        // per-antenna: P_R + M-linear P_SIG terms
};

Parts compute_parts(const SystemConfig& config, int k, double p_tx_relay) {
    const double t = config.coherence_symbols();
    const double tau = config.tau_r(k);
    const double pre = 1.0 - tau / t;
    if (pre < 0) throw domain_error("total_power: pilot overhead exceeds coherence interval");
    if (p_tx_relay < 0) throw domain_error("total_power: p_tx_relay must be >= 0");

    Parts parts;
    parts.p_pa = 0.5 / config.pa_eff_device_eta * pre * k * config.device_tx_power_ptxd +
                 (2.0 * k * tau / t) * config.pilot_power_w / config.pa_eff_device_eta +
                 0.5 / config.pa_eff_relay_eta * pre * p_tx_relay;
    parts.p_tc_const = 2.0 * k * config.p_device + config.p_syn;
    const double b_over_lr = config.bandwidth_b / config.compute_eff_lr;
    parts.p_sig_const = b_over_lr * (static_cast<double>(k) * k * k) / (3.0 * t);
    parts.p_cm = config.p_relay_per_antenna +
                 b_over_lr * (8.0 * k * k / t + pre * 4.0 * k + (9.0 * k * k + 3.0 * k) / (3.0 * t));
    return parts;
}

}  // namespace

PowerBreakdown total_power(const SystemConfig& config, int num_pairs, int num_antennas,
                           double p_tx_relay) {
    if (num_pairs < 1 || num_antennas < num_pairs)
        throw domain_error("total_power: need M >= K >= 1");
    const Parts parts = compute_parts(config, num_pairs, p_tx_relay);
    PowerBreakdown out;
    out.p_pa = parts.p_pa;
    out.p_tc = num_antennas * config.p_relay_per_antenna + parts.p_tc_const;
    out.p_sig = parts.p_sig_const +
                (parts.p_cm - config.p_relay_per_antenna) * num_antennas;
    out.p_fix = config.p_fix;
    out.p_tot = out.p_pa + out.p_fix + out.p_tc + out.p_sig;
    return out;
}

PowerAffineInM power_affine_in_m(const SystemConfig& config, int num_pairs, double p_tx_relay) {
    const Parts parts = compute_parts(config, num_pairs, p_tx_relay);
    return {parts.p_pa + config.p_fix + parts.p_tc_const + parts.p_sig_const, parts.p_cm};
}

}  // namespace eerelay
