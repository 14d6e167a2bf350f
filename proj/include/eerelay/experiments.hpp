// Experiment front end: validation/optimization/oracle/complexity sweeps with
// deterministic CSV output and static SVG plots.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eerelay/config.hpp"
#include "eerelay/topology.hpp"

namespace eerelay {

enum class ExperimentKind { validate, sweep, optimize, oracle, complexity };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::validate;
    std::string swept_parameter;       // K | M | p_tx_relay_dbm | r_max | rho_r | R0
    std::vector<double> sweep_values;  // nonempty, inside the parameter domain
    SystemConfig base_config;
    double p_tx_relay_w = 1.0;  // relay power for validate/sweep points (30 dBm)
    TopologyDistribution topology = UniformAnnulus{};  // MC sampling only
    int mc_trials = 10000;
    std::vector<std::uint64_t> seeds = {1};
    std::filesystem::path output_dir = ".";
    int oracle_power_levels = 50;  // D' for oracle/complexity runs
    int multistart = 4;            // optimize: extra randomized starts
    bool emit_plots = true;
    int workers = 0;               // 0 -> hardware concurrency
};

/// Maps "K"/"M"/... onto the config, validating the domain.
SystemConfig config_with(const SystemConfig& base, const std::string& parameter, double value);

/// Per-point accuracy comparison of the MC estimate against every analytic
/// expression. Writes validate.csv; returns the path.
std::filesystem::path run_validate(const ExperimentSpec& spec);

/// Analytic-only sweep (no MC columns). Writes sweep.csv.
std::filesystem::path run_sweep(const ExperimentSpec& spec);

/// Joint optimization per sweep value; infeasible points are flagged in the
/// `infeasible` column and the run continues. Writes optimize.csv + trace.csv.
std::filesystem::path run_optimize(const ExperimentSpec& spec);

/// Exhaustive-search oracle per sweep value. Writes oracle.csv.
std::filesystem::path run_oracle(const ExperimentSpec& spec);

/// Operation-count comparison over an M_max sweep. Writes complexity.csv and
/// a log-scale plot.
std::filesystem::path run_complexity(const ExperimentSpec& spec);

/// Entry point used by the CLI. Returns the process exit code contract:
/// 0 success, 2 config error, 3 infeasible everywhere, 4 numerical failure.
int run_experiment(const ExperimentSpec& spec);

}  // namespace eerelay
