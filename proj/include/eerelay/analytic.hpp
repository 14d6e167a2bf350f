// Deterministic-equivalent rate and energy-efficiency expressions.
#pragma once

#include <vector>

#include "eerelay/config.hpp"
#include "eerelay/power.hpp"
#include "eerelay/topology.hpp"

namespace eerelay {

struct RateReport {
    std::vector<double> sinr_hop1;      // gamma_k^(1)
    std::vector<double> sinr_hop2;      // gamma_k^(2)
    std::vector<double> rate_per_pair;  // min of the two hop rates [bit/s/Hz]
    double sum_rate = 0;                // with prelog and B/2 [bit/s]
    double relay_tx_power = 0;          // [W]
};

/// Relay-side equal power split: p_k = (M-K) * p_tx_relay / A2.
struct PowerAllocation {
    std::vector<double> p;  // [W], diag of P^2
};

PowerAllocation equal_power_allocation(const LsfProfile& profile, int num_antennas,
                                       double p_tx_relay);

/// Gain sums entering the i.u.d. expressions: A1 (error-gain sum) and A2
/// (inverse-estimate-gain sum), either per-profile or annulus-averaged.
struct AnalyticCoefficients {
    double a1;
    double a2;
    int num_pairs;
    int num_antennas;
    enum class Flavor { known_location, iud } flavor;
};

/// A1 = sum_j beta_tilde_j over sources; A2 = sum_k (beta'_{k+K})^-1 over
/// destinations (known-location flavor).
AnalyticCoefficients profile_coefficients(const LsfProfile& profile, int num_antennas);

/// Annulus-averaged flavor: a1 = Atilde1, a2 = Atilde2.
AnalyticCoefficients annulus_coefficients(const SystemConfig& config, int num_pairs,
                                          int num_antennas);

/// Atilde1 = K*c*E_l[1/(l^alpha + tau*rho*c)] by adaptive quadrature
/// (relative tolerance 1e-12).
double atilde1(const SystemConfig& config, int num_pairs);
/// Same quantity through the hypergeometric closed form; independent check
/// path for the quadrature.
double atilde1_closed_form(const SystemConfig& config, int num_pairs);

/// Atilde2 = K*E_l[(beta')^-1] by quadrature (relative tolerance 1e-12).
double atilde2(const SystemConfig& config, int num_pairs);
/// Closed polynomial-moment form of Atilde2 (without the source text's
/// spurious trailing square on the brace).
double atilde2_closed_form(const SystemConfig& config, int num_pairs);

struct EEResult {
    double ee = 0;                  // [bit/J]
    double sum_rate = 0;            // [bit/s]
    double rate_hop1 = 0;           // per-pair [bit/s/Hz] (average when per-k)
    double rate_hop2 = 0;
    PowerBreakdown power;
    double p_tx_relay = 0;
    int num_pairs = 0;
    int num_antennas = 0;
    double device_density_rho_ue = 0;  // K / (pi (r_max^2 - r_min^2))
};

/// Asymptotic per-pair rates for a known profile and arbitrary allocation.
RateReport theorem1_rates(const LsfProfile& profile, int num_antennas,
                          const PowerAllocation& alloc, const SystemConfig& config);

/// Equal-power specialization of the above assembled into an EE value.
EEResult corollary1_ee(const LsfProfile& profile, int num_antennas, double p_tx_relay,
                       const SystemConfig& config);

/// i.u.d.-location EE: per-hop expected rates as 1-D integrals over the
/// annulus distance density, min'ed per hop (min of expectations).
EEResult theorem2_ee(const SystemConfig& config, int num_pairs, int num_antennas,
                     double p_tx_relay);

/// Closed-form Jensen lower bound of theorem2_ee.
EEResult corollary2_lower_bound(const SystemConfig& config, int num_pairs, int num_antennas,
                                double p_tx_relay);

double device_density(const SystemConfig& config, int num_pairs);

}  // namespace eerelay
