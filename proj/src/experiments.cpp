#include "eerelay/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "eerelay/mc.hpp"
#include "eerelay/optimizer.hpp"
#include "eerelay/quadrature.hpp"
#include "eerelay/topology.hpp"

namespace eerelay {

namespace {

// Shortest round-trip decimal form; keeps CSV output byte-stable.
std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

// Ordered parallel map: evaluates fn over [0, n) on a small pool, returns
// results in index order so output never depends on scheduling.
template <class Fn>
auto ordered_map(int n, int workers, Fn&& fn) {
    using R = std::invoke_result_t<Fn, int>;
    std::vector<R> results(static_cast<std::size_t>(n));
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, n));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    results[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

// Minimal static SVG line plot (one or more series, optional log10 y).
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<double>& x,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series,
                    bool log_y) {
    const double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    auto tx = [&](double v, double lo, double hi, double a, double b) {
        return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b);
    };
    double xlo = x.front(), xhi = x.back();
    double ylo = 1e300, yhi = -1e300;
    for (const auto& [name, ys] : series)
        for (double v : ys) {
            const double y = log_y ? std::log10(std::max(v, 1e-300)) : v;
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    if (ylo == yhi) {
        ylo -= 1;
        yhi += 1;
    }
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << (log_y ? " (log10 y)" : "") << "</text>\n";
    out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
        << "' stroke='black'/>\n<line x1='" << ml << "' y1='" << mt << "' x2='" << ml
        << "' y2='" << h - mb << "' stroke='black'/>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    int ci = 0;
    for (const auto& [name, ys] : series) {
        out << "<polyline fill='none' stroke='" << colors[ci % 5] << "' points='";
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double y = log_y ? std::log10(std::max(ys[i], 1e-300)) : ys[i];
            out << tx(x[i], xlo, xhi, ml, w - mr) << "," << tx(y, ylo, yhi, h - mb, mt) << " ";
        }
        out << "'/>\n<text x='" << w - mr - 150 << "' y='" << mt + 16 * ci
            << "' font-size='12' fill='" << colors[ci % 5] << "'>" << name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace

SystemConfig config_with(const SystemConfig& base, const std::string& parameter, double value) {
    SystemConfig cfg = base;
    if (parameter == "K")
        cfg.num_pairs_k = static_cast<int>(value);
    else if (parameter == "M")
        cfg.num_antennas_m = static_cast<int>(value);
    else if (parameter == "r_max")
        cfg.r_max = value;
    else if (parameter == "rho_r")
        cfg.pilot_snr_rho_r = value;
    else if (parameter == "R0")
        cfg.qos_floor_r0 = value;
    else if (parameter == "m_max")
        cfg.m_max = static_cast<int>(value);
    else if (parameter != "p_tx_relay_dbm")
        throw config_error("unknown swept parameter '" + parameter + "'");
    return cfg;
}

namespace {

struct ValidatePoint {
    double param = 0;
    double ee_mc = 0, ee_thm1 = 0, ee_cor1 = 0, ee_thm2 = 0, ee_lb = 0;
    double rate_mc = 0, rate_thm2 = 0, rate_lb = 0, mc_stderr = 0;
    int k = 0, m = 0;
    double p = 0;
};

ValidatePoint validate_point(const ExperimentSpec& spec, double value, bool with_mc) {
    SystemConfig cfg = config_with(spec.base_config, spec.swept_parameter, value);
    cfg.validate();
    const int k = cfg.num_pairs_k;
    const int m = cfg.num_antennas_m;
    const double p = spec.swept_parameter == "p_tx_relay_dbm" ? dbm_to_watt(value)
                                                              : spec.p_tx_relay_w;

    ValidatePoint out;
    out.param = value;
    out.k = k;
    out.m = m;
    out.p = p;
    const EEResult thm2 = theorem2_ee(cfg, k, m, p);
    const EEResult lb = corollary2_lower_bound(cfg, k, m, p);
    out.ee_thm2 = thm2.ee;
    out.rate_thm2 = std::min(thm2.rate_hop1, thm2.rate_hop2);
    out.ee_lb = lb.ee;
    out.rate_lb = std::min(lb.rate_hop1, lb.rate_hop2);

    double sum_thm1 = 0, sum_cor1 = 0, sum_mc = 0, sum_mc2 = 0, sum_rate_mc = 0;
    int batches = 0;
    for (std::uint64_t seed : spec.seeds) {
        const LsfProfile profile = sample_topology(cfg, k, seed, spec.topology);
        const PowerAllocation alloc = equal_power_allocation(profile, m, p);
        const RateReport t1 = theorem1_rates(profile, m, alloc, cfg);
        sum_thm1 += t1.sum_rate / total_power(cfg, k, m, t1.relay_tx_power).p_tot;
        sum_cor1 += corollary1_ee(profile, m, p, cfg).ee;
        if (with_mc) {
            // Batched MC estimate; the batch spread gives the standard error.
            const int nb = 8;
            const int per = std::max(2, spec.mc_trials / nb);
            for (int b = 0; b < nb; ++b) {
                const EEResult mc =
                    estimate_ee_mc(profile, m, alloc, cfg, per, derive_seed(seed, 7000 + b));
                sum_mc += mc.ee;
                sum_mc2 += mc.ee * mc.ee;
                sum_rate_mc += std::min(mc.rate_hop1, mc.rate_hop2);
                ++batches;
            }
        }
    }
    const double ns = static_cast<double>(spec.seeds.size());
    out.ee_thm1 = sum_thm1 / ns;
    out.ee_cor1 = sum_cor1 / ns;
    if (batches > 0) {
        out.ee_mc = sum_mc / batches;
        out.rate_mc = sum_rate_mc / batches;
        const double var = std::max(0.0, sum_mc2 / batches - out.ee_mc * out.ee_mc);
        out.mc_stderr = std::sqrt(var / batches);
    }
    return out;
}

std::filesystem::path write_validate_csv(const ExperimentSpec& spec, bool with_mc) {
    std::filesystem::create_directories(spec.output_dir);
    const auto path =
        spec.output_dir / (with_mc ? "validate.csv" : "sweep.csv");
    CsvWriter csv(path, {"param", "ee_mc", "ee_thm1", "ee_cor1", "ee_thm2", "ee_lb", "rate_mc",
                         "rate_thm2", "rate_lb", "mc_stderr", "k", "m", "p_tx_relay_w",
                         "p_tx_relay_dbm"});
    const auto pts = ordered_map(
        static_cast<int>(spec.sweep_values.size()), spec.workers,
        [&](int i) { return validate_point(spec, spec.sweep_values[i], with_mc); });
    std::vector<double> xs, ee_lb_s, ee_thm2_s, ee_mc_s;
    for (const auto& p : pts) {
        csv.row({fmt(p.param), fmt(p.ee_mc), fmt(p.ee_thm1), fmt(p.ee_cor1), fmt(p.ee_thm2),
                 fmt(p.ee_lb), fmt(p.rate_mc), fmt(p.rate_thm2), fmt(p.rate_lb),
                 fmt(p.mc_stderr), fmt(p.k), fmt(p.m), fmt(p.p), fmt(watt_to_dbm(p.p))});
        xs.push_back(p.param);
        ee_lb_s.push_back(p.ee_lb);
        ee_thm2_s.push_back(p.ee_thm2);
        ee_mc_s.push_back(p.ee_mc);
    }
    if (spec.emit_plots && xs.size() > 1) {
        std::vector<std::pair<std::string, std::vector<double>>> series = {
            {"ee_thm2", ee_thm2_s}, {"ee_lb", ee_lb_s}};
        if (with_mc) series.emplace_back("ee_mc", ee_mc_s);
        write_svg_plot(spec.output_dir / (with_mc ? "validate.svg" : "sweep.svg"),
                       "EE vs " + spec.swept_parameter, xs, series, false);
    }
    return path;
}

}  // namespace

std::filesystem::path run_validate(const ExperimentSpec& spec) {
    return write_validate_csv(spec, true);
}

std::filesystem::path run_sweep(const ExperimentSpec& spec) {
    return write_validate_csv(spec, false);
}

namespace {

struct OptRow {
    double value = 0;
    bool infeasible = false;
    Optimum opt;
    std::vector<TraceRecord> trace;
};

OptRow optimize_point(const ExperimentSpec& spec, double value) {
    SystemConfig cfg = config_with(spec.base_config, spec.swept_parameter, value);
    OptRow row;
    row.value = value;
    try {
        OptimumWithTrace best = optimize_joint(cfg, {});
        // Multistart over deterministic pseudo-random feasible corners; the
        // problem is non-convex and the default start occasionally lands in a
        // poor basin.
        for (int s = 1; s < spec.multistart; ++s) {
            const std::uint64_t h = derive_seed(0xEE5EEDULL, s);
            JointOptions o;
            o.p0 = cfg.relay_max_power_prmax * (0.05 + 0.9 * ((h >> 8) % 1000) / 999.0);
            o.m0 = 2 + static_cast<int>((h >> 24) % static_cast<unsigned>(cfg.m_max - 1));
            o.k0 = 1 + static_cast<int>((h >> 40) % static_cast<unsigned>(
                                            std::max(1, o.m0.value() - 1)));
            try {
                OptimumWithTrace cand = optimize_joint(cfg, o);
                if (cand.optimum.ee_lb_star > best.optimum.ee_lb_star) best = std::move(cand);
            } catch (const infeasible_error&) {
            }
        }
        row.opt = best.optimum;
        row.trace = std::move(best.trace);
    } catch (const infeasible_error&) {
        row.infeasible = true;
    }
    return row;
}

}  // namespace

std::filesystem::path run_optimize(const ExperimentSpec& spec) {
    std::filesystem::create_directories(spec.output_dir);
    const auto path = spec.output_dir / "optimize.csv";
    CsvWriter csv(path, {"value", "p_star_dbm", "p_star_w", "k_star", "m_star", "rho_ue_star",
                         "ee_lb_star", "qos_achieved", "iterations", "converged", "infeasible"});
    CsvWriter trace_csv(spec.output_dir / "optimize_trace.csv",
                        {"value", "stage", "iteration", "xi", "mu1", "mu2", "mu3", "mu4",
                         "p_tx_relay_w", "k", "m", "ee_lb"});
    const auto rows =
        ordered_map(static_cast<int>(spec.sweep_values.size()), spec.workers,
                    [&](int i) { return optimize_point(spec, spec.sweep_values[i]); });
    std::vector<double> xs, ees, ps, ms, rhos;
    bool any_feasible = false;
    for (const auto& r : rows) {
        if (r.infeasible) {
            csv.row({fmt(r.value), "", "", "", "", "", "", "", "", "", "1"});
            continue;
        }
        any_feasible = true;
        csv.row({fmt(r.value), fmt(watt_to_dbm(r.opt.p_star)), fmt(r.opt.p_star),
                 fmt(r.opt.k_star), fmt(r.opt.m_star), fmt(r.opt.rho_ue_star),
                 fmt(r.opt.ee_lb_star), fmt(r.opt.qos_achieved), fmt(r.opt.iterations),
                 fmt(r.opt.converged ? 1 : 0), "0"});
        for (const auto& t : r.trace)
            trace_csv.row({fmt(r.value), t.stage, fmt(t.iteration), fmt(t.xi), fmt(t.mu[0]),
                           fmt(t.mu[1]), fmt(t.mu[2]), fmt(t.mu[3]), fmt(t.p_tx_relay),
                           fmt(t.num_pairs), fmt(t.num_antennas), fmt(t.ee_lb)});
        xs.push_back(r.value);
        ees.push_back(r.opt.ee_lb_star);
        ps.push_back(watt_to_dbm(r.opt.p_star));
        ms.push_back(r.opt.m_star);
        rhos.push_back(r.opt.rho_ue_star);
    }
    if (!any_feasible) throw infeasible_error(InfeasibleCause::no_feasible_k,
                                              "run_optimize: every sweep point infeasible");
    if (spec.emit_plots && xs.size() > 1) {
        write_svg_plot(spec.output_dir / "optimize_ee.svg",
                       "optimum EE_LB vs " + spec.swept_parameter, xs, {{"ee_lb_star", ees}},
                       false);
        write_svg_plot(spec.output_dir / "optimize_params.svg",
                       "optimum parameters vs " + spec.swept_parameter, xs,
                       {{"p_star_dbm", ps}, {"m_star", ms}}, false);
    }
    return path;
}

std::filesystem::path run_oracle(const ExperimentSpec& spec) {
    std::filesystem::create_directories(spec.output_dir);
    const auto path = spec.output_dir / "oracle.csv";
    CsvWriter csv(path, {"value", "p_star_dbm", "p_star_w", "k_star", "m_star", "rho_ue_star",
                         "ee_lb_star", "qos_achieved", "evaluations", "infeasible"});
    bool any_feasible = false;
    for (double value : spec.sweep_values) {
        SystemConfig cfg = config_with(spec.base_config, spec.swept_parameter, value);
        try {
            const OracleResult res = brute_force_oracle(cfg, spec.oracle_power_levels, true);
            any_feasible = true;
            csv.row({fmt(value), fmt(watt_to_dbm(res.optimum.p_star)), fmt(res.optimum.p_star),
                     fmt(res.optimum.k_star), fmt(res.optimum.m_star),
                     fmt(res.optimum.rho_ue_star), fmt(res.optimum.ee_lb_star),
                     fmt(res.optimum.qos_achieved), fmt(res.complexity.evaluation_count), "0"});
        } catch (const infeasible_error&) {
            csv.row({fmt(value), "", "", "", "", "", "", "", "0", "1"});
        }
    }
    if (!any_feasible) throw infeasible_error(InfeasibleCause::no_feasible_k,
                                              "run_oracle: every sweep point infeasible");
    return path;
}

std::filesystem::path run_complexity(const ExperimentSpec& spec) {
    std::filesystem::create_directories(spec.output_dir);
    const auto path = spec.output_dir / "complexity.csv";
    CsvWriter csv(path, {"m_max", "es_count", "alg2_count", "log10_es_original"});
    const int dprime = spec.oracle_power_levels;
    std::vector<double> xs, es, alg2;
    for (double value : spec.sweep_values) {
        const int m_max = static_cast<int>(value);
        SystemConfig cfg = spec.base_config;
        cfg.m_max = m_max;
        // ES on the reformulated problem: D' * sum_{M=2..Mmax} (M-1).
        const long long es_count =
            static_cast<long long>(dprime) * m_max * (m_max - 1) / 2;
        long long alg2_count = 0;
        try {
            alg2_count = optimize_joint(cfg, {}).objective_evaluations;
        } catch (const infeasible_error&) {
        }
        // Original mixed-integer ES, leading term of
        // [Mmax D (2(D+1)^Mmax - Mmax D - D) - 2(D+1)^Mmax + 2] / (2 D^2);
        // only meaningful on a log axis.
        const double log10_original = std::log10(2.0 * (static_cast<double>(m_max) * dprime - 1)) +
                                      m_max * std::log10(dprime + 1.0) -
                                      std::log10(2.0 * dprime * dprime);
        csv.row({fmt(m_max), fmt(es_count), fmt(alg2_count), fmt(log10_original)});
        xs.push_back(value);
        es.push_back(static_cast<double>(es_count));
        alg2.push_back(static_cast<double>(std::max(1LL, alg2_count)));
    }
    if (spec.emit_plots && xs.size() > 1)
        write_svg_plot(spec.output_dir / "complexity.svg", "operation counts vs M_max", xs,
                       {{"exhaustive_search", es}, {"algorithm2", alg2}}, true);
    return path;
}

int run_experiment(const ExperimentSpec& spec) {
    try {
        switch (spec.kind) {
            case ExperimentKind::validate: run_validate(spec); break;
            case ExperimentKind::sweep: run_sweep(spec); break;
            case ExperimentKind::optimize: run_optimize(spec); break;
            case ExperimentKind::oracle: run_oracle(spec); break;
            case ExperimentKind::complexity: run_complexity(spec); break;
        }
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace eerelay
