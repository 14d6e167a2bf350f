// Energy-efficient resource allocation: Dinkelbach + dual-gradient power
// control, antenna-count relaxation, device-pair search, the block-coordinate
// outer loop, and the exhaustive-search oracle.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eerelay/analytic.hpp"
#include "eerelay/config.hpp"

namespace eerelay {

enum class InfeasibleCause {
    hop1_cap,        // hop-1 LB rate below R0; no relay power can fix it
    power_limited,   // hop-2 LB rate below R0 even at P_Rmax
    antenna_limited, // no M <= M_max meets the QoS floor
    no_feasible_k,   // every K violates the QoS constraint
};

class infeasible_error : public std::runtime_error {
  public:
    infeasible_error(InfeasibleCause cause, const std::string& what)
        : std::runtime_error(what), cause_(cause) {}
    InfeasibleCause cause() const { return cause_; }

  private:
    InfeasibleCause cause_;
};

/// Raised when the block-coordinate objective decreases (each block step is a
/// coordinate maximization, so this indicates an internal inconsistency).
class optimizer_consistency_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OptimizerTolerances {
    double eps_mu = 1e-6;         // inner dual-step tolerance |delta mu|
    double eps_dinkelbach = 1e-9; // |F(xi)| / N tolerance [bit/s/Hz scale]
};

/// One record of the convergence-trace stream. mu is normalized by
/// N = (1 - tau_r/T) B K / 2, which makes the duals dimensionless; the rate
/// multiplier in the closed-form power update is (1 + mu2), so mu4 (the
/// slack-variable stationarity residual) equals mu1 + mu2 and the whole
/// vector stays nonnegative under the [.]+ projection.
struct TraceRecord {
    std::string stage;  // "power" | "antennas" | "pairs" | "joint"
    int iteration = 0;
    double xi = 0;                       // Dinkelbach parameter [bit/J]
    std::array<double, 4> mu{0, 0, 0, 0};
    double p_tx_relay = 0;
    int num_pairs = 0;
    int num_antennas = 0;
    double ee_lb = 0;
};

struct PowerOptResult {
    double p_star = 0;
    double xi_star = 0;  // optimal EE ratio [bit/J]
    int outer_iterations = 0;
    bool converged = false;
};

struct Optimum {
    double p_star = 0;
    int k_star = 0;
    int m_star = 0;
    double ee_lb_star = 0;       // maximized objective [bit/J]
    double rho_ue_star = 0;      // pairs / m^2
    double qos_achieved = 0;     // min-hop LB rate at the optimum [bit/s/Hz]
    int iterations = 0;
    bool converged = false;
};

struct OptimumWithTrace {
    Optimum optimum;
    std::vector<TraceRecord> trace;
    long long objective_evaluations = 0;
};

struct ComplexityReport {
    long long evaluation_count = 0;  // objective evaluations on the grid
    int power_levels = 0;            // D'
};

struct OracleResult {
    Optimum optimum;
    ComplexityReport complexity;
};

/// Subproblem I: relay transmit power for fixed (K, M). Two-stage loop:
/// outer Dinkelbach update of xi, inner projected dual-gradient steps on
/// (mu1, mu2, mu3) with the closed-form stationary power candidate. The
/// returned power is feasible and meets the QoS floor whenever the problem is
/// feasible; hop-1 infeasibility is reported, never clamped away.
PowerOptResult optimize_power(const SystemConfig& config, int num_pairs, int num_antennas,
                              const OptimizerTolerances& tol = {}, int max_iters = 200,
                              std::vector<TraceRecord>* trace = nullptr);

/// Subproblem II: antenna count for fixed (K, P). Continuous relaxation with
/// the same Dinkelbach/dual structure; the inner stationarity in M' is solved
/// by safeguarded bisection on the Lagrangian derivative over [K+1, M_max],
/// then floor/ceil are compared by direct objective evaluation.
int optimize_antennas(const SystemConfig& config, int num_pairs, double p_tx_relay,
                      const OptimizerTolerances& tol = {}, int max_iters = 200,
                      std::vector<TraceRecord>* trace = nullptr);

/// Subproblem III: one-dimensional exhaustive search over the feasible device
/// pair counts; QoS violators are discarded, exact ties resolve to smaller K.
int optimize_pairs(const SystemConfig& config, double p_tx_relay, int num_antennas);

struct JointOptions {
    std::optional<double> p0;  // defaults: (P_Rmax/2, M_max/4, M_max/2)
    std::optional<int> k0;
    std::optional<int> m0;
    double epsilon = 1e-6;  // relative |delta EE_LB| stop
    int n_loop_max = 50;
    OptimizerTolerances tol;
};

/// Algorithm-2 style block-coordinate loop P -> M -> K. The EE_LB trace is
/// nondecreasing; a decrease beyond 1e-9 relative raises
/// optimizer_consistency_error.
OptimumWithTrace optimize_joint(const SystemConfig& config, const JointOptions& options = {});

/// Exhaustive search over D' uniform-in-dB power levels in (0, P_Rmax],
/// M in 2..M_max and K in 1..M-1. Returns the grid optimum and the number of
/// objective evaluations.
OracleResult brute_force_oracle(const SystemConfig& config, int power_grid_levels,
                                bool with_qos = true);

/// Optional oracle mode: per-pair power matrix search on a coarse grid using
/// the known-location rates (small K only; cost grows as D^K).
struct PerPairOracleResult {
    PowerAllocation allocation;
    double ee = 0;
    long long evaluation_count = 0;
};
PerPairOracleResult brute_force_per_pair(const SystemConfig& config, const LsfProfile& profile,
                                         int num_antennas, int power_levels);

/// Independent feasibility check of the reformulated constraints C1'-C4'.
bool check_feasibility(const SystemConfig& config, const Optimum& opt);

/// The maximized objective: prelog * B*K/2 * R_LB2 / P_tot, the rate term of
/// the reduced Lagrangian. Exposed for tests and the harness.
double hop2_objective(const SystemConfig& config, int num_pairs, int num_antennas,
                      double p_tx_relay);

}  // namespace eerelay
