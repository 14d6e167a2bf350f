#include "eerelay/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "eerelay/hyp2f1.hpp"
#include "eerelay/quadrature.hpp"

namespace eerelay {

namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double annulus_pdf(const SystemConfig& cfg, double l) {
    return 2.0 * l / (cfg.r_max * cfg.r_max - cfg.r_min * cfg.r_min);
}

// E[l^a] over the annulus density.
double annulus_moment(const SystemConfig& cfg, double a) {
    const double r = cfg.r_min, R = cfg.r_max;
    return 2.0 * (std::pow(R, a + 2.0) - std::pow(r, a + 2.0)) /
           ((a + 2.0) * (R * R - r * r));
}

}  // namespace

PowerAllocation equal_power_allocation(const LsfProfile& profile, int num_antennas,
                                       double p_tx_relay) {
    const int k = profile.num_pairs();
    if (num_antennas < k) throw domain_error("equal_power_allocation: need M >= K");
    if (p_tx_relay < 0) throw domain_error("equal_power_allocation: p_tx_relay must be >= 0");
    double a2 = 0;
    for (int i = 0; i < k; ++i) {
        const double bh = profile.beta_hat[k + i];
        if (bh <= 0)
            throw domain_error("equal_power_allocation: degenerate estimate gain at destination " +
                               std::to_string(i));
        a2 += 1.0 / bh;
    }
    PowerAllocation out;
    out.p.assign(k, (num_antennas - k) * p_tx_relay / a2);
    return out;
}

AnalyticCoefficients profile_coefficients(const LsfProfile& profile, int num_antennas) {
    const int k = profile.num_pairs();
    AnalyticCoefficients c{0.0, 0.0, k, num_antennas,
                           AnalyticCoefficients::Flavor::known_location};
    for (int j = 0; j < k; ++j) c.a1 += profile.beta_tilde[j];
    for (int j = 0; j < k; ++j) c.a2 += 1.0 / profile.beta_hat[k + j];
    return c;
}

AnalyticCoefficients annulus_coefficients(const SystemConfig& config, int num_pairs,
                                          int num_antennas) {
    return {atilde1(config, num_pairs), atilde2(config, num_pairs), num_pairs, num_antennas,
            AnalyticCoefficients::Flavor::iud};
}

double atilde1(const SystemConfig& config, int num_pairs) {
    if (num_pairs < 1) throw domain_error("atilde1: K >= 1");
    const double c = config.pathloss_ref_c;
    const double alpha = config.pathloss_exp_alpha;
    const double a = config.tau_r(num_pairs) * config.pilot_snr_effective() * c;
    if (!std::isfinite(a)) return 0.0;  // perfect-estimation limit
    const double integral = integrate(
        [&](double l) { return annulus_pdf(config, l) / (std::pow(l, alpha) + a); },
        config.r_min, config.r_max, 1e-12);
    return num_pairs * c * integral;
}

double atilde1_closed_form(const SystemConfig& config, int num_pairs) {
    const double alpha = config.pathloss_exp_alpha;
    const double c = config.pathloss_ref_c;
    const double taurho = config.tau_r(num_pairs) * config.pilot_snr_effective();
    const double a = taurho * c;
    if (!std::isfinite(a) || a == 0.0)
        throw domain_error("atilde1_closed_form: degenerate pilot SNR");
    const double b = 2.0 / alpha;
    auto piece = [&](double radius) {
        return radius * radius * hyp2f1_unit_a(b, std::pow(radius, alpha) / a);
    };
    const double span = config.r_max * config.r_max - config.r_min * config.r_min;
    return num_pairs / (taurho * span) * (piece(config.r_max) - piece(config.r_min));
}

double atilde2(const SystemConfig& config, int num_pairs) {
    if (num_pairs < 1) throw domain_error("atilde2: K >= 1");
    const double c = config.pathloss_ref_c;
    const double alpha = config.pathloss_exp_alpha;
    const double taurho = config.tau_r(num_pairs) * config.pilot_snr_effective();
    // (beta')^-1 = l^(2 alpha) / (tau rho c^2) + l^alpha / c
    const double integral = integrate(
        [&](double l) {
            const double la = std::pow(l, alpha);
            double v = la / c;
            if (std::isfinite(taurho)) v += la * la / (taurho * c * c);
            return annulus_pdf(config, l) * v;
        },
        config.r_min, config.r_max, 1e-12);
    return num_pairs * integral;
}

double atilde2_closed_form(const SystemConfig& config, int num_pairs) {
    const double c = config.pathloss_ref_c;
    const double alpha = config.pathloss_exp_alpha;
    const double taurho = config.tau_r(num_pairs) * config.pilot_snr_effective();
    double e_inv = annulus_moment(config, alpha) / c;
    if (std::isfinite(taurho)) e_inv += annulus_moment(config, 2.0 * alpha) / (taurho * c * c);
    return num_pairs * e_inv;
}

RateReport theorem1_rates(const LsfProfile& profile, int num_antennas,
                          const PowerAllocation& alloc, const SystemConfig& config) {
    const int k = profile.num_pairs();
    if (num_antennas < k) throw domain_error("theorem1_rates: need M >= K");
    const double ptxd = config.device_tx_power_ptxd;
    const double sr2 = config.noise_relay();
    const double sd2 = config.noise_dest();
    const double mk = num_antennas - k;

    double a1 = 0;
    for (int j = 0; j < k; ++j) a1 += profile.beta_tilde[j];
    double p_sum = 0;  // asymptotic long-term average relay power
    for (int j = 0; j < k; ++j) p_sum += alloc.p[j] / profile.beta_hat[k + j];
    // M = K leaves no ZF headroom: relay power diverges for any nonzero
    // allocation and both hop SINRs collapse to zero.
    const double ptx_relay =
        mk > 0 ? p_sum / mk : (p_sum > 0 ? std::numeric_limits<double>::infinity() : 0.0);

    RateReport r;
    r.sinr_hop1.resize(k);
    r.sinr_hop2.resize(k);
    r.rate_per_pair.resize(k);
    double sum = 0;
    for (int i = 0; i < k; ++i) {
        if (mk > 0) {
            r.sinr_hop1[i] = mk * ptxd * profile.beta_hat[i] / (ptxd * a1 + sr2);
            r.sinr_hop2[i] = alloc.p[i] / (profile.beta_tilde[k + i] * ptx_relay + sd2);
        } else {
            r.sinr_hop1[i] = 0.0;
            r.sinr_hop2[i] = 0.0;
        }
        r.rate_per_pair[i] = std::min(log2_1p(r.sinr_hop1[i]), log2_1p(r.sinr_hop2[i]));
        sum += r.rate_per_pair[i];
    }
    r.sum_rate = rate_prelog(config, k) * config.bandwidth_b / 2.0 * sum;
    r.relay_tx_power = ptx_relay;
    return r;
}

EEResult corollary1_ee(const LsfProfile& profile, int num_antennas, double p_tx_relay,
                       const SystemConfig& config) {
    const int k = profile.num_pairs();
    if (num_antennas < k) throw domain_error("corollary1_ee: need M >= K");
    if (p_tx_relay < 0 || p_tx_relay > config.relay_max_power_prmax)
        throw domain_error("corollary1_ee: p_tx_relay outside [0, P_Rmax]");
    const double ptxd = config.device_tx_power_ptxd;
    const double sr2 = config.noise_relay();
    const double sd2 = config.noise_dest();
    const double mk = num_antennas - k;

    double a1 = 0, a2 = 0;
    for (int j = 0; j < k; ++j) a1 += profile.beta_tilde[j];
    for (int j = 0; j < k; ++j) a2 += 1.0 / profile.beta_hat[k + j];

    double sum = 0, h1 = 0, h2 = 0;
    for (int i = 0; i < k; ++i) {
        const double s1 = mk * ptxd * profile.beta_hat[i] / (ptxd * a1 + sr2);
        const double s2 =
            mk * p_tx_relay / ((profile.beta_tilde[k + i] * p_tx_relay + sd2) * a2);
        const double r1 = log2_1p(s1), r2 = log2_1p(s2);
        h1 += r1;
        h2 += r2;
        sum += std::min(r1, r2);
    }
    EEResult out;
    out.power = total_power(config, k, num_antennas, p_tx_relay);
    out.sum_rate = rate_prelog(config, k) * config.bandwidth_b / 2.0 * sum;
    out.ee = out.sum_rate / out.power.p_tot;
    out.rate_hop1 = h1 / k;
    out.rate_hop2 = h2 / k;
    out.p_tx_relay = p_tx_relay;
    out.num_pairs = k;
    out.num_antennas = num_antennas;
    out.device_density_rho_ue = device_density(config, k);
    return out;
}

namespace {

struct IudRates {
    double r1;  // expected hop-1 rate [bit/s/Hz]
    double r2;  // expected hop-2 rate
};

IudRates theorem2_rates(const SystemConfig& config, int k, int m, double p_tx_relay) {
    const double c = config.pathloss_ref_c;
    const double alpha = config.pathloss_exp_alpha;
    const double tau = config.tau_r(k);
    const double rho = config.pilot_snr_effective();
    const double a1t = atilde1(config, k);
    const double a2t = atilde2(config, k);
    const double ptxd = config.device_tx_power_ptxd;
    const double sr2 = config.noise_relay();
    const double sd2 = config.noise_dest();
    const double mk = m - k;

    IudRates out;
    out.r1 = integrate(
        [&](double l) {
            const double beta = c * std::pow(l, -alpha);
            const double bh = beta_hat(beta, tau, rho);
            return annulus_pdf(config, l) * log2_1p(mk * ptxd * bh / (ptxd * a1t + sr2));
        },
        config.r_min, config.r_max, 1e-10);
    out.r2 = integrate(
        [&](double l) {
            const double beta = c * std::pow(l, -alpha);
            const double bt = beta - beta_hat(beta, tau, rho);
            return annulus_pdf(config, l) *
                   log2_1p(mk * p_tx_relay / ((p_tx_relay * bt + sd2) * a2t));
        },
        config.r_min, config.r_max, 1e-10);
    return out;
}

EEResult assemble_iud(const SystemConfig& config, int k, int m, double p_tx_relay, double r1,
                      double r2) {
    EEResult out;
    out.power = total_power(config, k, m, p_tx_relay);
    out.rate_hop1 = r1;
    out.rate_hop2 = r2;
    out.sum_rate =
        rate_prelog(config, k) * config.bandwidth_b * k / 2.0 * std::min(r1, r2);
    out.ee = out.sum_rate / out.power.p_tot;
    out.p_tx_relay = p_tx_relay;
    out.num_pairs = k;
    out.num_antennas = m;
    out.device_density_rho_ue = device_density(config, k);
    return out;
}

}  // namespace

EEResult theorem2_ee(const SystemConfig& config, int num_pairs, int num_antennas,
                     double p_tx_relay) {
    if (num_antennas < num_pairs) throw domain_error("theorem2_ee: need M >= K");
    if (2.0 * num_pairs >= config.coherence_symbols())
        throw domain_error("theorem2_ee: need 2K < T");
    const IudRates r = theorem2_rates(config, num_pairs, num_antennas, p_tx_relay);
    return assemble_iud(config, num_pairs, num_antennas, p_tx_relay, r.r1, r.r2);
}

EEResult corollary2_lower_bound(const SystemConfig& config, int num_pairs, int num_antennas,
                                double p_tx_relay) {
    if (num_antennas < num_pairs)
        throw domain_error("corollary2_lower_bound: need M >= K");
    if (2.0 * num_pairs >= config.coherence_symbols())
        throw domain_error("corollary2_lower_bound: need 2K < T");
    const AnalyticCoefficients co = annulus_coefficients(config, num_pairs, num_antennas);
    const double a1t = co.a1;
    const double a2t = co.a2;
    const double ptxd = config.device_tx_power_ptxd;
    const double mk = num_antennas - num_pairs;
    const double k = num_pairs;
    const double r1 =
        log2_1p(mk * k * ptxd / ((ptxd * a1t + config.noise_relay()) * a2t));
    const double r2 = log2_1p(mk * k * p_tx_relay /
                              ((p_tx_relay * a1t + k * config.noise_dest()) * a2t));
    return assemble_iud(config, num_pairs, num_antennas, p_tx_relay, r1, r2);
}

double device_density(const SystemConfig& config, int num_pairs) {
    return num_pairs /
           (std::numbers::pi * (config.r_max * config.r_max - config.r_min * config.r_min));
}

}  // namespace eerelay
