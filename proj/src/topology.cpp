#include "eerelay/topology.hpp"

#include <cmath>
#include <random>

namespace eerelay {

double beta_hat(double beta, double tau_r, double rho) {
    if (beta < 0 || tau_r < 0 || rho < 0)
        throw domain_error("beta_hat: arguments must be nonnegative");
    const double x = tau_r * rho * beta;
    if (!std::isfinite(x)) return beta;  // perfect-CSI limit
    return x * beta / (1.0 + x);
}

namespace {

double draw_area_uniform(std::mt19937_64& rng, double r_min, double r_max) {
    // l^2 uniform on [r_min^2, r_max^2] <=> density 2l/(r_max^2-r_min^2).
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s = r_min * r_min + u(rng) * (r_max * r_max - r_min * r_min);
    return std::sqrt(s);
}

}  // namespace

LsfProfile profile_from_distances(const SystemConfig& config, std::vector<double> distances) {
    if (distances.empty() || distances.size() % 2 != 0)
        throw domain_error("profile_from_distances: need 2K distances");
    const int k = static_cast<int>(distances.size()) / 2;
    const double tau = config.tau_r(k);
    const double rho = config.pilot_snr_effective();
    LsfProfile p;
    p.distances = std::move(distances);
    p.beta.reserve(p.distances.size());
    p.beta_hat.reserve(p.distances.size());
    p.beta_tilde.reserve(p.distances.size());
    for (double l : p.distances) {
        const double b = config.pathloss_ref_c * std::pow(l, -config.pathloss_exp_alpha);
        const double bh = eerelay::beta_hat(b, tau, rho);
        p.beta.push_back(b);
        p.beta_hat.push_back(bh);
        p.beta_tilde.push_back(b - bh);
    }
    return p;
}

LsfProfile sample_topology(const SystemConfig& config, int num_pairs, std::uint64_t rng_seed,
                           const TopologyDistribution& distribution) {
    if (num_pairs < 1) throw domain_error("sample_topology: num_pairs must be >= 1");
    if (!(config.r_min > 0) || !(config.r_min <= config.r_max))
        throw config_error("sample_topology: need 0 < r_min <= r_max");

    std::mt19937_64 rng(rng_seed);
    std::vector<double> dist(2 * static_cast<std::size_t>(num_pairs));
    if (std::holds_alternative<UniformAnnulus>(distribution)) {
        for (auto& l : dist) l = draw_area_uniform(rng, config.r_min, config.r_max);
    } else {
        const auto& ring = std::get<TwoRing>(distribution);
        if (!(ring.inner_radius > config.r_min && ring.inner_radius < config.r_max))
            throw config_error("sample_topology: two_ring inner_radius outside (r_min, r_max)");
        if (!(ring.inner_weight >= 0.0 && ring.inner_weight <= 1.0))
            throw config_error("sample_topology: two_ring inner_weight outside [0,1]");
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& l : dist) {
            const bool inner = u(rng) < ring.inner_weight;
            l = inner ? draw_area_uniform(rng, config.r_min, ring.inner_radius)
                      : draw_area_uniform(rng, ring.inner_radius, config.r_max);
        }
    }
    return profile_from_distances(config, std::move(dist));
}

}  // namespace eerelay
