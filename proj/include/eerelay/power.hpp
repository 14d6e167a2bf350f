// Circuit-plus-amplifier power consumption model.
#pragma once

#include "eerelay/config.hpp"

namespace eerelay {

struct PowerBreakdown {
    double p_pa = 0;   // power amplifiers (data + pilots, both hops)
    double p_tc = 0;   // transceiver chains: M*P_R + 2K*P_d + P_SYN
    double p_sig = 0;  // load-dependent signal processing
    double p_fix = 0;  // fixed site power
    double p_tot = 0;  // sum of the above
};

/// Fraction of the coherence interval left for each data hop: (1 - tau_r/T)
/// with tau_r = 2K by default. Negative values are a domain error upstream.
double rate_prelog(const SystemConfig& config, int num_pairs);

/// Total consumed power for K pairs, M antennas and relay transmit power
/// p_tx_relay. Throws domain_error when the pilot overhead exceeds the
/// coherence interval (negative prelog).
PowerBreakdown total_power(const SystemConfig& config, int num_pairs, int num_antennas,
                           double p_tx_relay);

/// M-affine split of the same model: p_tot == p_fixm + p_cm * M for every M.
/// Used by the antenna-count subproblem.
struct PowerAffineInM {
    double p_fixm;
    double p_cm;
};
PowerAffineInM power_affine_in_m(const SystemConfig& config, int num_pairs, double p_tx_relay);

}  // namespace eerelay
