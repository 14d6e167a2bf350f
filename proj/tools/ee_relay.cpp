// ee-relay: command-line front end for the relay EE toolkit.
#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "eerelay/experiments.hpp"
#include "eerelay/optimizer.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
    // "a,b,c" or "lo:step:hi"
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo, step, hi;
        char c1, c2;
        std::istringstream in(text);
        if (!(in >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || step <= 0)
            throw CLI::ValidationError("--values", "expected lo:step:hi");
        for (double v = lo; v <= hi + 1e-12 * std::abs(step); v += step) out.push_back(v);
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-efficiency toolkit for a massive-MIMO DF relay network"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::string param = "K";
    std::string values_text;
    std::vector<std::uint64_t> seeds{1};
    int mc_trials = 10000;
    int dprime = 50;
    double ptxr_dbm = 30.0;
    int workers = 0;
    int multistart = 4;
    bool no_plots = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--set", overrides, "config override key=value (repeatable)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--param", param, "swept parameter: K|M|p_tx_relay_dbm|r_max|rho_r|R0|m_max");
        sub->add_option("--values", values_text, "sweep values 'a,b,c' or 'lo:step:hi'");
        sub->add_option("--seeds", seeds, "RNG seeds");
        sub->add_option("--workers", workers, "worker threads (0 = hardware)");
        sub->add_flag("--no-plots", no_plots, "skip SVG plot emission");
    };

    double ring_radius = 0.0, ring_weight = 0.5;
    auto* validate = app.add_subcommand("validate", "MC vs analytic EE comparison sweep");
    add_common(validate);
    validate->add_option("--trials", mc_trials, "Monte-Carlo trials per point");
    validate->add_option("--ptxr-dbm", ptxr_dbm, "relay transmit power [dBm]");
    validate->add_option("--two-ring-radius", ring_radius,
                         "sample devices from two nested rings split at this radius [m]");
    validate->add_option("--two-ring-weight", ring_weight,
                         "probability mass of the inner ring");

    auto* sweep = app.add_subcommand("sweep", "analytic-only sweep");
    add_common(sweep);
    sweep->add_option("--ptxr-dbm", ptxr_dbm, "relay transmit power [dBm]");

    auto* optimize = app.add_subcommand("optimize", "joint resource allocation per sweep value");
    add_common(optimize);
    optimize->add_option("--multistart", multistart, "number of starts (>=1)");

    auto* oracle = app.add_subcommand("oracle", "exhaustive-search benchmark per sweep value");
    add_common(oracle);
    oracle->add_option("--dprime", dprime, "power grid levels D'");
    int per_pair_k = 0;
    oracle->add_option("--per-pair-k", per_pair_k,
                       "also run the per-pair power-matrix oracle at this K (<=4, coarse grid)");

    auto* complexity = app.add_subcommand("complexity", "operation-count comparison over M_max");
    add_common(complexity);
    complexity->add_option("--dprime", dprime, "power grid levels D'");

    CLI11_PARSE(app, argc, argv);

    eerelay::ExperimentSpec spec;
    try {
        spec.base_config =
            config_path.empty() ? eerelay::SystemConfig{} : eerelay::load_config(config_path);
        for (const auto& kv : overrides) eerelay::apply_override(spec.base_config, kv);
        spec.base_config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    if (app.got_subcommand(validate))
        spec.kind = eerelay::ExperimentKind::validate;
    else if (app.got_subcommand(sweep))
        spec.kind = eerelay::ExperimentKind::sweep;
    else if (app.got_subcommand(optimize))
        spec.kind = eerelay::ExperimentKind::optimize;
    else if (app.got_subcommand(oracle))
        spec.kind = eerelay::ExperimentKind::oracle;
    else
        spec.kind = eerelay::ExperimentKind::complexity;

    spec.swept_parameter = param;
    try {
        if (!values_text.empty()) {
            spec.sweep_values = parse_values(values_text);
        } else if (spec.kind == eerelay::ExperimentKind::complexity) {
            spec.sweep_values = {8, 16, 32, 64, 96, 128};
            spec.swept_parameter = "m_max";
        } else {
            spec.sweep_values = {static_cast<double>(spec.base_config.num_pairs_k)};
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (spec.sweep_values.empty()) {
        std::cerr << "config error: empty sweep\n";
        return 2;
    }
    spec.p_tx_relay_w = eerelay::dbm_to_watt(ptxr_dbm);
    if (ring_radius > 0.0)
        spec.topology = eerelay::TwoRing{ring_radius, ring_weight};
    spec.mc_trials = mc_trials;
    spec.seeds = seeds;
    spec.output_dir = out_dir;
    spec.oracle_power_levels = dprime;
    spec.multistart = std::max(1, multistart);
    spec.emit_plots = !no_plots;
    spec.workers = workers;

    const int rc = eerelay::run_experiment(spec);
    if (rc == 0 && app.got_subcommand(oracle) && per_pair_k > 0) {
        try {
            const auto profile =
                eerelay::sample_topology(spec.base_config, per_pair_k, spec.seeds.front());
            const auto pp = eerelay::brute_force_per_pair(
                spec.base_config, profile, spec.base_config.num_antennas_m, dprime);
            std::cout << "per-pair oracle (K=" << per_pair_k << ", M="
                      << spec.base_config.num_antennas_m << "): EE = " << pp.ee << " bit/J over "
                      << pp.evaluation_count << " grid points\n";
        } catch (const std::exception& e) {
            std::cerr << "per-pair oracle failed: " << e.what() << "\n";
            return 4;
        }
    }
    if (rc == 0) std::cout << "wrote results to " << out_dir << "\n";
    return rc;
}
