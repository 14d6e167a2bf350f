// Device topology and large-scale fading profile.
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "eerelay/config.hpp"

namespace eerelay {

/// MMSE estimate gain: beta' = tau*rho*beta^2 / (1 + tau*rho*beta).
/// Total on beta,tau,rho >= 0; result in [0, beta).
double beta_hat(double beta, double tau_r, double rho);

/// Per-device distances and large-scale coefficients for K source/destination
/// pairs. Index 0..K-1 are sources, K..2K-1 destinations.
struct LsfProfile {
    std::vector<double> distances;   // l_k [m]
    std::vector<double> beta;        // c * l^-alpha
    std::vector<double> beta_hat;    // MMSE estimate gains
    std::vector<double> beta_tilde;  // estimation error gains, beta - beta'

    int num_pairs() const { return static_cast<int>(distances.size()) / 2; }
};

struct UniformAnnulus {};
struct TwoRing {
    double inner_radius;  // [m], r_min < inner_radius < r_max
    double inner_weight;  // probability a device falls in the inner disc
};
using TopologyDistribution = std::variant<UniformAnnulus, TwoRing>;

/// Draws 2K i.i.d. device distances and fills the LSF coefficients.
/// uniform_annulus: density f(l) = 2l/(r_max^2 - r_min^2) on [r_min, r_max]
/// (uniform over the annulus area). two_ring: mixture of two such area-uniform
/// rings, the simulation-only non-uniform variant. Deterministic for a fixed
/// seed.
LsfProfile sample_topology(const SystemConfig& config, int num_pairs, std::uint64_t rng_seed,
                           const TopologyDistribution& distribution = UniformAnnulus{});

/// Builds the profile from caller-chosen distances (used by tests and the
/// degenerate-annulus cases).
LsfProfile profile_from_distances(const SystemConfig& config, std::vector<double> distances);

}  // namespace eerelay
