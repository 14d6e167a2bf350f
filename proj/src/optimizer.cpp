#include "eerelay/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

namespace eerelay {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Coefficients of the lower-bound SINRs for one K, reused across P and M.
struct LbContext {
    int k;
    double a1t;       // Atilde1
    double a2t;       // Atilde2
    double n_scale;   // N = prelog * B * K / 2
    double alpha2;    // K sigma_D^2 / A1t
};

LbContext make_context(const SystemConfig& cfg, int k) {
    LbContext c;
    c.k = k;
    c.a1t = atilde1(cfg, k);
    c.a2t = atilde2(cfg, k);
    c.n_scale = rate_prelog(cfg, k) * cfg.bandwidth_b * k / 2.0;
    c.alpha2 = k * cfg.noise_dest() / c.a1t;
    return c;
}

double rlb1(const SystemConfig& cfg, const LbContext& c, int m) {
    const double ptxd = cfg.device_tx_power_ptxd;
    const double s =
        (m - c.k) * c.k * ptxd / ((ptxd * c.a1t + cfg.noise_relay()) * c.a2t);
    return std::log1p(s) / kLn2;
}

double rlb2(const SystemConfig& cfg, const LbContext& c, int m, double p) {
    const double s =
        (m - c.k) * c.k * p / ((p * c.a1t + c.k * cfg.noise_dest()) * c.a2t);
    return std::log1p(s) / kLn2;
}

double objective(const SystemConfig& cfg, const LbContext& c, int m, double p) {
    return c.n_scale * rlb2(cfg, c, m, p) /
           total_power(cfg, c.k, m, p).p_tot;
}

double qos_rate(const SystemConfig& cfg, const LbContext& c, int m, double p) {
    return std::min(rlb1(cfg, c, m), rlb2(cfg, c, m, p));
}

// Diminishing dual step sizes tau0/sqrt(n); tau0 moves the dual by at most
// 10% of its scale on the first step.
struct DualStep {
    double tau0;
    double operator()(int n) const { return tau0 / std::sqrt(static_cast<double>(n)); }
};

DualStep make_step(double mu0, double first_residual) {
    return {0.1 * std::max(1.0, std::abs(mu0)) / (std::abs(first_residual) + 1e-9)};
}

std::atomic<long long> g_eval_counter{0};  // objective evaluations (complexity report)

double counted_objective(const SystemConfig& cfg, const LbContext& c, int m, double p) {
    g_eval_counter.fetch_add(1, std::memory_order_relaxed);
    return objective(cfg, c, m, p);
}

}  // namespace

double hop2_objective(const SystemConfig& config, int num_pairs, int num_antennas,
                      double p_tx_relay) {
    const LbContext c = make_context(config, num_pairs);
    return objective(config, c, num_antennas, p_tx_relay);
}

PowerOptResult optimize_power(const SystemConfig& config, int num_pairs, int num_antennas,
                              const OptimizerTolerances& tol, int max_iters,
                              std::vector<TraceRecord>* trace) {
    if (num_antennas <= num_pairs) throw domain_error("optimize_power: need M > K");
    const LbContext c = make_context(config, num_pairs);
    const int k = num_pairs, m = num_antennas;
    const double r0 = config.qos_floor_r0;
    const double prmax = config.relay_max_power_prmax;

    if (rlb1(config, c, m) < r0)
        throw infeasible_error(InfeasibleCause::hop1_cap,
                               "optimize_power: hop-1 LB rate below the QoS floor; no relay "
                               "power can recover it");
    if (rlb2(config, c, m, prmax) < r0)
        throw infeasible_error(InfeasibleCause::power_limited,
                               "optimize_power: QoS floor unreachable within P_Rmax");

    const double alpha1 = (m - k) * k / (c.a2t * c.a1t);
    const double alpha2 = c.alpha2;
    // Minimum power meeting the hop-2 QoS: alpha1 P/(P+alpha2) = 2^R0 - 1.
    const double s0 = std::exp2(r0) - 1.0;
    const double p_qos = s0 < alpha1 ? s0 * alpha2 / (alpha1 - s0) : prmax;

    // Power-affine denominator: P_tot = P_CF + E_PA * P.
    const double p_cf = total_power(config, k, m, 0.0).p_tot;
    const double e_pa = 0.5 / config.pa_eff_relay_eta * rate_prelog(config, k);
    const double n = c.n_scale;

    // Dinkelbach parameter, started from a feasible interior point.
    double p_star = std::clamp(prmax / 2.0, p_qos, prmax);
    double xi = n * rlb2(config, c, m, p_star) / (p_cf + e_pa * p_star);

    // Duals are normalized by N (see TraceRecord). The lambda-stationarity
    // identity folds N into the rate multiplier, i.e. the closed-form power
    // uses (1 + mu2) where the source text writes mu2.
    std::array<double, 3> mu{0.0, 0.0, 0.0};
    PowerOptResult out;

    auto stationary_power = [&](double xi_cur, const std::array<double, 3>& duals) {
        const double denom = (duals[2] * n + xi_cur * e_pa) * kLn2;
        const double alpha3 =
            alpha1 * alpha2 * (1.0 + duals[1]) * n / denom - alpha2 * alpha2;
        const double disc = (alpha1 + 2.0) * (alpha1 + 2.0) * alpha2 * alpha2 +
                            4.0 * (alpha1 + 1.0) * alpha3;
        const double root =
            (-(alpha1 + 2.0) * alpha2 + std::sqrt(std::max(0.0, disc))) /
            (2.0 * (alpha1 + 1.0));
        return std::clamp(std::max(root, p_qos), 0.0, prmax);
    };

    for (int outer = 1; outer <= max_iters; ++outer) {
        out.outer_iterations = outer;
        // Inner stage: projected dual gradient with diminishing steps.
        std::array<double, 3> duals = mu;
        std::array<DualStep, 3> steps{};
        for (int inner = 1; inner <= max_iters; ++inner) {
            const double p = stationary_power(xi, duals);
            const std::array<double, 3> resid{rlb1(config, c, m) - r0,
                                              rlb2(config, c, m, p) - r0, prmax - p};
            if (inner == 1)
                for (int i = 0; i < 3; ++i) steps[i] = make_step(duals[i], resid[i]);
            double max_delta = 0;
            for (int i = 0; i < 3; ++i) {
                const double next = std::max(0.0, duals[i] - steps[i](inner) * resid[i]);
                max_delta = std::max(max_delta, std::abs(next - duals[i]));
                duals[i] = next;
            }
            p_star = p;
            if (max_delta <= tol.eps_mu) break;
        }
        mu = duals;

        const double numer = n * rlb2(config, c, m, p_star);
        const double denom = p_cf + e_pa * p_star;
        const double f_over_n = (numer - xi * denom) / n;  // F(xi)/N, bit/s/Hz scale
        xi = numer / denom;
        if (trace)
            trace->push_back({"power", outer, xi, {mu[0], mu[1], mu[2], mu[0] + mu[1]},
                              p_star, k, m, numer / denom});
        if (std::abs(f_over_n) <= tol.eps_dinkelbach) {
            out.converged = true;
            break;
        }
    }
    out.p_star = p_star;
    out.xi_star = xi;
    return out;
}

int optimize_antennas(const SystemConfig& config, int num_pairs, double p_tx_relay,
                      const OptimizerTolerances& tol, int max_iters,
                      std::vector<TraceRecord>* trace) {
    if (num_pairs < 1) throw domain_error("optimize_antennas: K >= 1");
    const LbContext c = make_context(config, num_pairs);
    const int k = num_pairs;
    const int m_max = config.m_max;
    const double r0 = config.qos_floor_r0;
    if (m_max <= k)
        throw infeasible_error(InfeasibleCause::antenna_limited,
                               "optimize_antennas: M_max <= K leaves no ZF degrees of freedom");

    // Per-(M-K) SINR slopes of the two hops; rates are log2(1 + s (M'-K)).
    const double ptxd = config.device_tx_power_ptxd;
    const double s1 = k * ptxd / ((ptxd * c.a1t + config.noise_relay()) * c.a2t);
    const double s2 = k * p_tx_relay /
                      ((p_tx_relay * c.a1t + k * config.noise_dest()) * c.a2t);
    if (qos_rate(config, c, m_max, p_tx_relay) < r0)
        throw infeasible_error(InfeasibleCause::antenna_limited,
                               "optimize_antennas: QoS floor unreachable within M_max");
    const double s0 = std::exp2(r0) - 1.0;
    const double m_qos =
        s2 > 0 ? k + std::max(s0 / s1, s0 / s2) : k + s0 / s1;

    const auto [p_fixm, p_cm] = power_affine_in_m(config, k, p_tx_relay);
    const double n = c.n_scale;

    double m_cont = std::min<double>(m_max, std::max<double>(k + 1, m_qos));
    double xi = n * (std::log1p(s2 * (m_cont - k)) / kLn2) / (p_fixm + p_cm * m_cont);

    std::array<double, 3> mu{0.0, 0.0, 0.0};
    // d/dM' of the reduced Lagrangian; decreasing in M', so a sign change
    // brackets the stationary point.
    auto lagrangian_slope = [&](double mp, double xi_cur, const std::array<double, 3>& duals) {
        double v = (1.0 + duals[1]) * n * s2 / ((1.0 + s2 * (mp - k)) * kLn2) -
                   xi_cur * p_cm - duals[2] * n;
        v += duals[0] * n * s1 / ((1.0 + s1 * (mp - k)) * kLn2);
        return v;
    };
    auto stationary_m = [&](double xi_cur, const std::array<double, 3>& duals) {
        double lo = k + 1.0, hi = static_cast<double>(m_max);
        if (lagrangian_slope(lo, xi_cur, duals) <= 0) return std::max(lo, std::min(hi, m_qos));
        if (lagrangian_slope(hi, xi_cur, duals) >= 0) return hi;
        for (int it = 0; it < 200 && hi - lo > 1e-9 * m_max; ++it) {
            const double mid = 0.5 * (lo + hi);
            (lagrangian_slope(mid, xi_cur, duals) > 0 ? lo : hi) = mid;
        }
        return std::max(0.5 * (lo + hi), std::min(hi, m_qos));
    };

    for (int outer = 1; outer <= max_iters; ++outer) {
        std::array<double, 3> duals = mu;
        std::array<DualStep, 3> steps{};
        for (int inner = 1; inner <= max_iters; ++inner) {
            const double mp = stationary_m(xi, duals);
            const std::array<double, 3> resid{std::log1p(s1 * (mp - k)) / kLn2 - r0,
                                              std::log1p(s2 * (mp - k)) / kLn2 - r0,
                                              static_cast<double>(m_max) - mp};
            if (inner == 1)
                for (int i = 0; i < 3; ++i) steps[i] = make_step(duals[i], resid[i]);
            double max_delta = 0;
            for (int i = 0; i < 3; ++i) {
                const double next = std::max(0.0, duals[i] - steps[i](inner) * resid[i]);
                max_delta = std::max(max_delta, std::abs(next - duals[i]));
                duals[i] = next;
            }
            m_cont = mp;
            if (max_delta <= tol.eps_mu) break;
        }
        mu = duals;
        const double numer = n * std::log1p(s2 * (m_cont - k)) / kLn2;
        const double denom = p_fixm + p_cm * m_cont;
        const double f_over_n = (numer - xi * denom) / n;
        xi = numer / denom;
        if (trace)
            trace->push_back({"antennas", outer, xi, {mu[0], mu[1], mu[2], mu[0] + mu[1]},
                              p_tx_relay, k, static_cast<int>(std::lround(m_cont)),
                              numer / denom});
        if (std::abs(f_over_n) <= tol.eps_dinkelbach) break;
    }

    // Integer recovery: ceil(M'*) against floor(M'*) by direct evaluation,
    // clamped to the feasible integer range.
    const int lo = std::clamp(static_cast<int>(std::floor(m_cont)), k + 1, m_max);
    const int hi = std::clamp(static_cast<int>(std::ceil(m_cont)), k + 1, m_max);
    int best = -1;
    double best_val = -1;
    for (int cand : {hi, lo}) {  // ceil first: equal objectives keep M* = ceil
        if (qos_rate(config, c, cand, p_tx_relay) < r0) continue;
        const double v = counted_objective(config, c, cand, p_tx_relay);
        if (v > best_val) {
            best_val = v;
            best = cand;
        }
    }
    if (best < 0) {
        // floor/ceil both infeasible; take the smallest feasible integer
        best = std::clamp(static_cast<int>(std::ceil(m_qos)), k + 1, m_max);
        while (best <= m_max && qos_rate(config, c, best, p_tx_relay) < r0) ++best;
        if (best > m_max)
            throw infeasible_error(InfeasibleCause::antenna_limited,
                                   "optimize_antennas: QoS floor unreachable within M_max");
    }
    return best;
}

int optimize_pairs(const SystemConfig& config, double p_tx_relay, int num_antennas) {
    if (num_antennas < 2) throw domain_error("optimize_pairs: need M >= 2");
    const int k_cap = std::min<int>(
        num_antennas - 1,
        static_cast<int>(std::floor((config.coherence_symbols() - 1.0) / 2.0)));
    int best_k = -1;
    double best_val = -1;
    for (int k = 1; k <= k_cap; ++k) {
        const LbContext c = make_context(config, k);
        if (qos_rate(config, c, num_antennas, p_tx_relay) < config.qos_floor_r0) continue;
        const double v = counted_objective(config, c, num_antennas, p_tx_relay);
        if (v > best_val) {  // strict: exact ties keep the smaller K
            best_val = v;
            best_k = k;
        }
    }
    if (best_k < 0)
        throw infeasible_error(InfeasibleCause::no_feasible_k,
                               "optimize_pairs: every pair count violates the QoS floor");
    return best_k;
}

OptimumWithTrace optimize_joint(const SystemConfig& config, const JointOptions& options) {
    const long long eval_start = g_eval_counter;
    const double t = config.coherence_symbols();
    double p = std::clamp(options.p0.value_or(config.relay_max_power_prmax / 2.0), 0.0,
                          config.relay_max_power_prmax);
    int m = std::clamp(options.m0.value_or(config.m_max / 2), 2, config.m_max);
    int k = std::clamp(options.k0.value_or(config.m_max / 4), 1,
                       std::min(m - 1, static_cast<int>((t - 1.0) / 2.0)));

    OptimumWithTrace out;
    double last = -1.0;
    for (int n = 1; n <= options.n_loop_max; ++n) {
        const double p_prev = p;
        const int m_prev = m, k_prev = k;

        p = optimize_power(config, k, m, options.tol).p_star;
        m = optimize_antennas(config, k, p, options.tol);
        k = optimize_pairs(config, p, m);

        double val = hop2_objective(config, k, m, p);
        // Coordinate maximization safeguard: a block proposal may lose to the
        // incumbent only through tolerance noise; keep the better iterate.
        if (n > 1 && val < last) {
            const double prev_val = hop2_objective(config, k_prev, m_prev, p_prev);
            if (prev_val > val) {
                p = p_prev;
                m = m_prev;
                k = k_prev;
                val = prev_val;
            }
            if (last - val > 1e-9 * std::abs(last))
                throw optimizer_consistency_error(
                    "optimize_joint: EE_LB decreased along the block-coordinate trace");
        }
        out.trace.push_back({"joint", n, val, {0, 0, 0, 0}, p, k, m, val});
        out.optimum.iterations = n;
        if (n > 1 && std::abs(val - last) <= options.epsilon * std::abs(val)) {
            out.optimum.converged = true;
            last = val;
            break;
        }
        last = val;
    }

    const LbContext c = make_context(config, k);
    out.optimum.p_star = p;
    out.optimum.k_star = k;
    out.optimum.m_star = m;
    out.optimum.ee_lb_star = last;
    out.optimum.rho_ue_star = device_density(config, k);
    out.optimum.qos_achieved = qos_rate(config, c, m, p);
    out.objective_evaluations = g_eval_counter - eval_start;
    return out;
}

OracleResult brute_force_oracle(const SystemConfig& config, int power_grid_levels,
                                bool with_qos) {
    if (power_grid_levels < 2) throw domain_error("brute_force_oracle: D' >= 2");
    const double prmax_dbm = watt_to_dbm(config.relay_max_power_prmax);
    const double t = config.coherence_symbols();
    const int k_cap = static_cast<int>((t - 1.0) / 2.0);

    OracleResult out;
    out.complexity.power_levels = power_grid_levels;
    double best = -1;
    for (int k = 1; k < config.m_max && k <= k_cap; ++k) {
        const LbContext c = make_context(config, k);
        for (int m = k + 1; m <= config.m_max; ++m) {
            const double r1 = rlb1(config, c, m);
            for (int i = 1; i <= power_grid_levels; ++i) {
                const double p = dbm_to_watt(prmax_dbm * i / power_grid_levels);
                ++out.complexity.evaluation_count;
                if (with_qos && std::min(r1, rlb2(config, c, m, p)) < config.qos_floor_r0)
                    continue;
                const double v = objective(config, c, m, p);
                if (v > best) {
                    best = v;
                    out.optimum.p_star = p;
                    out.optimum.k_star = k;
                    out.optimum.m_star = m;
                    out.optimum.qos_achieved = std::min(r1, rlb2(config, c, m, p));
                }
            }
        }
    }
    if (best < 0)
        throw infeasible_error(InfeasibleCause::no_feasible_k,
                               "brute_force_oracle: no feasible grid point");
    out.optimum.ee_lb_star = best;
    out.optimum.rho_ue_star = device_density(config, out.optimum.k_star);
    out.optimum.converged = true;
    out.optimum.iterations = 1;
    return out;
}

PerPairOracleResult brute_force_per_pair(const SystemConfig& config, const LsfProfile& profile,
                                         int num_antennas, int power_levels) {
    const int k = profile.num_pairs();
    if (k > 4) throw domain_error("brute_force_per_pair: K > 4 is intractable by design");
    if (power_levels < 2) throw domain_error("brute_force_per_pair: need >= 2 levels");

    // Per-pair cap chosen so every grid point satisfies the asymptotic relay
    // power constraint when all pairs sit at the top level.
    const double mk = num_antennas - k;
    double inv_sum = 0;
    for (int i = 0; i < k; ++i) inv_sum += 1.0 / profile.beta_hat[k + i];
    const double p_cap = mk * config.relay_max_power_prmax / inv_sum;

    PerPairOracleResult out;
    out.allocation.p.assign(k, 0.0);
    std::vector<int> idx(k, 0);
    std::vector<double> levels(power_levels);
    for (int i = 0; i < power_levels; ++i) levels[i] = p_cap * (i + 1) / power_levels;

    PowerAllocation alloc;
    alloc.p.assign(k, 0.0);
    while (true) {
        for (int i = 0; i < k; ++i) alloc.p[i] = levels[idx[i]];
        double relay_power = 0;
        for (int i = 0; i < k; ++i) relay_power += alloc.p[i] / profile.beta_hat[k + i];
        relay_power /= mk;
        ++out.evaluation_count;
        if (relay_power <= config.relay_max_power_prmax) {
            const RateReport r = theorem1_rates(profile, num_antennas, alloc, config);
            const double ee =
                r.sum_rate / total_power(config, k, num_antennas, relay_power).p_tot;
            if (ee > out.ee) {
                out.ee = ee;
                out.allocation = alloc;
            }
        }
        int pos = 0;
        while (pos < k && ++idx[pos] == power_levels) idx[pos++] = 0;
        if (pos == k) break;
    }
    return out;
}

bool check_feasibility(const SystemConfig& config, const Optimum& opt) {
    if (opt.m_star < 1 || opt.m_star > config.m_max) return false;
    if (opt.k_star < 1 || opt.k_star >= opt.m_star) return false;
    if (opt.p_star < 0 || opt.p_star > config.relay_max_power_prmax * (1 + 1e-12)) return false;
    const EEResult lb =
        corollary2_lower_bound(config, opt.k_star, opt.m_star, opt.p_star);
    return std::min(lb.rate_hop1, lb.rate_hop2) >= config.qos_floor_r0 - 1e-9;
}

}  // namespace eerelay
